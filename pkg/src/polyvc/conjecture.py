"""Desk-scale experiments: growth rates of ev_n against hyperbolic volume,
edge-length estimates from perturbed colorings, the one-variable profile
whose maximum is the tetrahedron volume, and q-factorial asymptotics."""
import itertools
import math
import time
import warnings
from dataclasses import dataclass, field

import mpmath
import numpy as np
from mpmath import mpf

from . import graphs as G
from . import hypgeom as H
from . import spinnet as S
from .errors import NumericalError, PolyVCError, PreconditionError
from .qarith import EvalPoint, HalfInt, ev_brace_fact, lobachevsky


def _is_tetra(g):
    return len(g.rotation) == 4 and len(g.ends) == 6


def _check_angles(gamma):
    for e, x in gamma.items():
        if not 0 < float(x) <= math.pi + 1e-12:
            raise PreconditionError("angle %r on edge %s is outside (0, pi]" % (x, e))


def ev_graph(g, c, pt, family=None):
    """(graded value, method) of the bracket of (g, c) at A0, through the
    cheapest exact route available."""
    if family is not None:
        return S.bracket_family(family, c, pt), "family"
    if _is_tetra(g):
        return S.ev_sixj([c[e] for e in G.tetra_edge_order(g)], pt), "sixj"
    v = S.ev_bracket(g, c, pt)
    return v, v.method


def _log_abs(v):
    if v.is_zero or v.coeff == 0:
        raise NumericalError("bracket vanishes at A0")
    return mpmath.log(abs(v.coeff))


def growth_rate(g, gamma, n, family=None, precision_bits=None):
    """(pi/n) log|ev_n| for c_n(gamma); returns (growth, method)."""
    _check_angles(gamma)
    pt = EvalPoint(n, precision_bits)
    c = G.coloring_from_angles(gamma, n)
    G.require_admissible(g, c)
    v, method = ev_graph(g, c, pt, family)
    with pt.workprec():
        return float(mpmath.pi / n * _log_abs(v)), method


@dataclass
class ConvergenceRow:
    n: int
    growth: float
    target: float
    method: str
    wall_time: float = 0.0
    gap: float = field(init=False)
    error: str = ""

    def __post_init__(self):
        self.gap = abs(self.growth - self.target) if self.growth == self.growth else float("nan")

    def as_dict(self, timing=False):
        d = {"n": self.n, "growth": self.growth, "target": self.target,
             "gap": self.gap, "method": self.method}
        if timing:
            d["wall_time"] = self.wall_time
        if self.error:
            d["error"] = self.error
        return d


def volume_target(g, gamma, family=None):
    if family is not None:
        return float(H.glued_volume(family, gamma))
    if _is_tetra(g):
        return float(H.tet_volume(H.tet_angles_from_edges(gamma, G.tetra_edge_order(g))))
    raise PreconditionError("no volume formula for this graph; pass a target")


def convergence_scan(g, gamma, n_list, family=None, target=None, precision_bits=None):
    """One row per n; a failing row is recorded and the scan continues."""
    n_list = list(n_list)
    if not n_list:
        return []
    if target is None:
        target = volume_target(g, gamma, family)
    rows = []
    for n in n_list:
        t0 = time.perf_counter()
        try:
            gr, method = growth_rate(g, gamma, n, family, precision_bits)
            rows.append(ConvergenceRow(n, gr, float(target), method, time.perf_counter() - t0))
        except PolyVCError as exc:
            rows.append(ConvergenceRow(n, float("nan"), float(target), "error",
                                       time.perf_counter() - t0, error=str(exc)))
    return rows


# ---------------------------------------------------------------------------
# length estimates from perturbed colorings

def cycle_perturbations(g, edges_filter=None, max_len=6):
    """Perturbations supported on simple cycles of g with every sign
    pattern; each vertex then sees 0 or 2 half-unit changes, so parity is
    preserved. Returns a list of {edge: +-1 (doubled)}."""
    cycles = H._simple_cycles(list(g.rotation), g.ends)
    out = []
    for cyc in sorted(cycles, key=lambda s: (len(s), sorted(s))):
        if len(cyc) > max_len:
            continue
        if edges_filter is not None and not cyc & set(edges_filter):
            continue
        es = sorted(cyc)
        for signs in itertools.product((1, -1), repeat=len(es)):
            out.append(dict(zip(es, signs)))
    return out


def length_estimates(g, gamma, n, face=None, family=None, precision_bits=None, max_len=6):
    """Edge-length estimates l_e from log-ratios of perturbed brackets.

    With c = c_n(gamma), fits log|ev<c+delta>| - log|ev<c>| ~ sum 2 delta_e x_e
    by least squares over cycle-supported delta; since c grows as gamma
    shrinks, l_e = -2 x_e. Returns ({edge: l_e}, info).
    """
    _check_angles(gamma)
    pt = EvalPoint(n, precision_bits)
    c = G.coloring_from_angles(gamma, n)
    G.require_admissible(g, c)
    filt = g.face_edges(face) if face is not None else None
    deltas = cycle_perturbations(g, filt, max_len)
    unknowns = sorted({e for d in deltas for e in d})
    col = {e: i for i, e in enumerate(unknowns)}
    t = G.twice_map(g, c)
    base, _ = ev_graph(g, c, pt, family)
    with pt.workprec():
        lb = _log_abs(base)
    rows, rhs, orders = [], [], set()
    for d in deltas:
        tt = dict(t)
        for e, s in d.items():
            tt[e] += s
        cc = {e: HalfInt(twice=x) for e, x in tt.items()}
        if not G.is_admissible(g, cc):
            continue
        v, _ = ev_graph(g, cc, pt, family)
        if v.is_zero:
            continue
        orders.add(v.order_twice - base.order_twice)
        row = np.zeros(len(unknowns))
        for e, s in d.items():
            row[col[e]] = s  # 2 * delta = s
        rows.append(row)
        with pt.workprec():
            rhs.append(float(_log_abs(v) - lb))
    Amat = np.array(rows)
    if len(rows) < len(unknowns) or np.linalg.matrix_rank(Amat) < len(unknowns):
        raise NumericalError("perturbation system is rank deficient")
    x, *_ = np.linalg.lstsq(Amat, np.array(rhs), rcond=None)
    if orders != {0}:
        warnings.warn("perturbed brackets change order by %s" % sorted(orders))
    ell = {e: float(-2 * x[col[e]]) for e in unknowns}
    if filt is not None:
        ell = {e: ell[e] for e in filt}
    info = {"deltas": len(rows), "orders": sorted(orders),
            "residual": float(np.linalg.norm(Amat @ x - np.array(rhs)))}
    return ell, info


def tet_length_estimates(t, n, precision_bits=None):
    """Length estimates for a tetrahedron in TetAngles order."""
    g = G.tetrahedron()
    edges = G.tetra_edge_order(g)
    ell, info = length_estimates(g, dict(zip(edges, t)), n, precision_bits=precision_bits)
    return [ell[e] for e in edges], info


def tet_main_equation_residuals(t, lengths):
    """Main-equation residual on each face of a tetrahedron, lengths in
    TetAngles order."""
    from .recursion import main_equation_residual
    g, gamma, edges = H.tetra_graph_data(t)
    lm = dict(zip(edges, lengths))
    return [main_equation_residual(H.face_cycle_data(g, gamma, f, lm)) for f in range(4)]


# ---------------------------------------------------------------------------
# the one-variable volume profile

def profile_sums(t):
    """Triangle sums tau_i (vertex triples) and square sums nu_j."""
    a, b, c, ap, bp, cp = (mpf(x) for x in t)
    tau = (a + b + c, a + bp + cp, ap + b + cp, ap + bp + c)
    nu = (a + ap + b + bp, a + ap + c + cp, b + bp + c + cp)
    return tau, nu


def fs_value(s, tau, nu):
    L = lobachevsky
    s = mpf(s)
    return (-L(2 * mpmath.pi - s / 2) + sum(L((t - s) / 2 - mpmath.pi) for t in tau)
            - sum(L(-2 * mpmath.pi + (v - s) / 2) for v in nu))


def _golden(f, a, b, tol=1e-12, maxit=200):
    gr = (mpmath.sqrt(5) - 1) / 2
    c, d = b - gr * (b - a), a + gr * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(maxit):
        if b - a < tol:
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - gr * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + gr * (b - a)
            fd = f(d)
    s = (a + b) / 2
    return s, f(s)


def fs_profile(t, s_grid=None, points=129):
    """(argmax s*, max value, [(s, f(s))]) over [0, min tau - 2pi].

    A grid scan locates candidate maxima; each interior local maximum of the
    grid is refined by golden section and the best is kept.
    """
    t = H.TetAngles(*t)
    if not H.tet_admissible(t):
        raise PreconditionError("angles %s are not admissible" % (tuple(t),))
    tau, nu = profile_sums(t)
    hi = min(tau) - 2 * mpmath.pi
    if s_grid is None:
        s_grid = [hi * i / (points - 1) for i in range(points)]
    s_grid = [mpf(s) for s in s_grid]
    if any(s < 0 or s > hi for s in s_grid):
        raise PreconditionError("grid leaves the domain [0, %s]" % mpmath.nstr(hi, 8))
    f = lambda s: fs_value(s, tau, nu)
    table = [(s, f(s)) for s in s_grid]
    cands = []
    for i, (s, v) in enumerate(table):
        left = table[i - 1][1] if i > 0 else None
        right = table[i + 1][1] if i + 1 < len(table) else None
        if (left is None or v >= left) and (right is None or v >= right):
            lo = table[i - 1][0] if i > 0 else s
            up = table[i + 1][0] if i + 1 < len(table) else s
            cands.append((lo, up))
    best = None
    for lo, up in cands:
        s, v = _golden(f, lo, up) if up > lo else (lo, f(lo))
        if best is None or v > best[1]:
            best = (s, v)
    return best[0], best[1], table


def delta_terms(t):
    """Gap between tet_volume and the profile maximum: a sum over the four
    vertex triples (x, y, z) of
    (L((x+y-z)/2) + L((x-y+z)/2) + L((-x+y+z)/2) - L((x+y+z)/2)) / 2.
    It vanishes when every angle is pi."""
    a, b, c, ap, bp, cp = (mpf(x) for x in t)
    L = lobachevsky
    tot = mpf(0)
    for x, y, z in ((a, b, c), (a, bp, cp), (ap, b, cp), (ap, bp, c)):
        tot += (L((x + y - z) / 2) + L((x - y + z) / 2) + L((-x + y + z) / 2)
                - L((x + y + z) / 2)) / 2
    return tot


def fs_volume(t):
    """Volume recovered from the profile: max f + delta_terms."""
    _, v, _ = fs_profile(t)
    return v + delta_terms(t)


def fs_root_sign(t):
    """+1 if z_- = exp(i s*), -1 if z_- = -exp(i s*)."""
    s, _, _ = fs_profile(t)
    zm, _ = H.z_pm(t)
    e = mpmath.expj(s)
    return 1 if abs(zm - e) < abs(zm + e) else -1


# ---------------------------------------------------------------------------
# q-factorial asymptotics

@dataclass
class FactAsympRow:
    n: int
    a: int
    value: float
    target: float
    deviation: float
    phase_error: float


def factasymp_check(alpha, n_list, precision_bits=None):
    """Rows comparing (pi/n) log of the normalized ev({a}!) with -Lambda(pi alpha),
    a = floor(alpha n). For alpha < 1 the factorial is divided by i^a; for
    alpha > 1 (one vanishing factor) by (-1)^{n+a} 2 n^2 i^{a+1} e^{-i pi/2n}."""
    alpha = float(alpha)
    if not (0 <= alpha < 1 or 1 < alpha < 2):
        raise PreconditionError("alpha must lie in [0, 1) or (1, 2)")
    rows = []
    for n in n_list:
        pt = EvalPoint(n, precision_bits)
        a = int(math.floor(alpha * n))
        with pt.workprec():
            target = -lobachevsky(mpmath.pi * alpha)
            if a == 0:
                rows.append(FactAsympRow(n, 0, 0.0, float(target), float(abs(target)), 0.0))
                continue
            v = ev_brace_fact(a, pt)
            if alpha < 1:
                norm = v.coeff / mpmath.mpc(1j) ** a
            else:
                pref = ((-1) ** (n + a) * 2 * mpf(n) ** 2 * mpmath.mpc(1j) ** (a + 1)
                        * mpmath.expjpi(-mpf(1) / (2 * n)))
                norm = v.coeff / pref
            phase = abs(mpmath.arg(norm))
            val = mpmath.pi / n * mpmath.log(abs(norm))
            rows.append(FactAsympRow(n, a, float(val), float(target),
                                     float(abs(val - target)), float(phase)))
    return rows
