"""Quick invariant suites, one per module, for the CLI's --selftest flag.

Each suite returns a list of (name, ok, detail). They are meant to finish in
a few seconds; the full checks live in the test suite.
"""
import cmath
import math

import mpmath
import numpy as np

from . import conjecture as C
from . import graphs as G
from . import hypgeom as H
from . import recursion as R
from . import spinnet as S
from .qarith import EvalPoint, HalfInt, ev_brace_fact, lobachevsky, qint


def _row(name, err, tol):
    err = float(err)
    return (name, err < tol, "%.3g (tol %.0e)" % (err, tol))


def suite_qarith():
    A = cmath.exp(0.37j) * 0.9
    out = [_row("qint symmetric in A -> 1/A", max(abs(qint(k, A) - qint(k, 1 / A)) for k in range(1, 8)), 1e-12)]
    out.append(_row("Lambda(pi/4) from Clausen", abs(8 * lobachevsky(mpmath.pi / 4) - mpmath.mpf("3.66386237670887606")), 1e-15))
    v = ev_brace_fact(0, EvalPoint(50))
    out.append(_row("empty factorial is 1", abs(v.coeff - 1) + v.order_twice, 1e-30))
    return out


def suite_graphs():
    out = []
    for name in ("tetrahedron", "theta", "cube", "prism"):
        g = getattr(G, name)()
        chi = len(g.rotation) - len(g.ends) + len(g.faces())
        out.append(("Euler characteristic of %s" % name, chi == 2, "V-E+F=%d" % chi))
    c = G.coloring_from_angles({0: 3 * math.pi / 4}, 8)
    out.append(("coloring of 3pi/4 at n=8", c[0] == HalfInt(5), str(c[0])))
    return out


def suite_spinnet():
    g = G.tetrahedron()
    A = cmath.exp(1j * math.pi / 26)
    worst = 0.0
    for t in ([1] * 6, [2] * 6, [2, 2, 2, 1, 1, 1], [2, 1, 1, 2, 1, 1]):
        c = {e: HalfInt(twice=x) for e, x in zip(g.edges, t)}
        if not G.is_admissible(g, c):
            continue
        a = S.shadow_bracket(g, c, A)
        b = S.sixj([c[e] for e in G.tetra_edge_order(g)], A)
        worst = max(worst, abs(a - b) / max(abs(b), 1e-300))
    out = [_row("shadow sum equals 6j on the tetrahedron", worst, 1e-10)]
    c = G.uniform(g, HalfInt(1))
    out.append(_row("external region invariance", S.shadow_bracket_invariance_check(g, c, A), 1e-10))
    return out


def suite_hypgeom():
    out = [_row("octahedron volume", abs(H.tet_volume((math.pi,) * 6) - 8 * lobachevsky(mpmath.pi / 4)), 1e-12)]
    rng = np.random.default_rng(5)
    worst = 0.0
    for t in H.random_admissible(rng, 5):
        v, u1, u2 = H.volume_terms(t)
        worst = max(worst, abs(v - u1), abs(v - u2))
    out.append(_row("three volume expressions agree", worst, 1e-9))
    out.append(_row("face equations at all 3pi/4", max(H.tet_face_residuals((3 * math.pi / 4,) * 6)), 1e-4))
    return out


def suite_recursion():
    g = G.tetrahedron()
    A = cmath.exp(1j * math.pi / 100)
    worst = 0.0
    for t in ([2] * 6, [2, 2, 2, 1, 1, 1], [3, 3, 2, 1, 1, 2]):
        c = {e: HalfInt(twice=x) for e, x in zip(g.edges, t)}
        if not G.is_admissible(g, c):
            continue
        for f in range(4):
            for o in (1, -1):
                worst = max(worst, R.check_circle_recursion(g, c, f, orientation=o, A=A))
    out = [_row("circle recursion on tetrahedron faces", worst, 1e-9)]
    out.append(_row("det of limit matrix", abs(R.v_limit(2.2, 2.4, 2.0).det() - 1), 1e-12))
    out.append(_row("forcing identity", R.forcing_identity_residual(0.8), 1e-12))
    return out


def suite_conjecture():
    s, v, _ = C.fs_profile((math.pi,) * 6, points=33)
    out = [_row("profile maximum at pi/2 for all-pi", abs(s - mpmath.pi / 2), 1e-8)]
    out.append(_row("profile maximum is 8 Lambda(pi/4)", abs(v - 8 * lobachevsky(mpmath.pi / 4)), 1e-10))
    t = (3 * math.pi / 4,) * 6
    out.append(_row("profile recovers tet volume", abs(C.fs_volume(t) - H.tet_volume(t)), 1e-9))
    rows = C.factasymp_check(0.0, [10])
    out.append(_row("alpha=0 deviation", rows[0].deviation, 1e-30))
    return out


SUITES = {
    "qarith": suite_qarith,
    "graphs": suite_graphs,
    "spinnet": suite_spinnet,
    "hypgeom": suite_hypgeom,
    "recursion": suite_recursion,
    "conjecture": suite_conjecture,
}


def run(modules):
    """Run the named suites; returns (all_ok, rows) with rows (module, name, ok, detail)."""
    rows = []
    for m in modules:
        for name, ok, detail in SUITES[m]():
            rows.append((m, name, bool(ok), detail))
    return all(r[2] for r in rows), rows
