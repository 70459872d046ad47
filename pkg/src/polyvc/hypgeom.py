"""Hyperideal polyhedra: angle conditions, truncation lengths, the
Murakami-Yano tetrahedron volume, Schlafli lengths and SL2(R) face holonomy.

All angles are exterior dihedral angles in (0, pi].
"""
import itertools
import math
import warnings
from collections import namedtuple

import mpmath
from mpmath import mpc, mpf

from . import graphs as G
from .errors import NumericalError, PreconditionError
from .qarith import dilog

_FIELDS = ("alpha", "beta", "gamma", "alpha_p", "beta_p", "gamma_p")


class TetAngles(namedtuple("TetAngles", _FIELDS)):
    """Exterior angles: (alpha, beta, gamma) at one vertex, primes on the
    opposite edges. Same edge layout as a 6j-symbol (a, b, c, d, e, f)."""

    __slots__ = ()

    def __new__(cls, *args):
        if len(args) == 1:
            args = tuple(args[0])
        if len(args) != 6:
            raise PreconditionError("a tetrahedron has six angles")
        vals = tuple(float(x) for x in args)
        for x in vals:
            if not 0 < x <= math.pi + 1e-12:
                raise PreconditionError("angle %r outside (0, pi]" % x)
        return super().__new__(cls, *vals)

    def vertex_sums(self):
        a, b, c, ap, bp, cp = self
        return (a + b + c, a + bp + cp, ap + b + cp, ap + bp + c)


def tet_admissible(t):
    return all(s > 2 * math.pi for s in t.vertex_sums())


def tet_angles_from_edges(gamma, edges):
    """TetAngles from an angle map and six edge ids in 6j layout."""
    return TetAngles(*(gamma[e] for e in edges))


def random_admissible(rng, count):
    """Seeded rejection sampling of admissible tetrahedra."""
    out = []
    while len(out) < count:
        t = TetAngles(*(math.pi * (1 - rng.random()) for _ in range(6)))
        if tet_admissible(t) and min(s - 2 * math.pi for s in t.vertex_sums()) > 1e-3:
            out.append(t)
    return out


# ---------------------------------------------------------------------------
# Bao-Bonahon conditions

def _simple_cycles(nodes, edges):
    """Simple cycles of a multigraph as frozensets of edge ids (length >= 2)."""
    adj = {v: [] for v in nodes}
    for e, (a, b) in edges.items():
        adj[a].append((e, b))
        adj[b].append((e, a))
    found = set()
    order = sorted(nodes)
    for s in order:
        # cycles whose smallest vertex is s
        stack = [(s, [s], [])]
        while stack:
            v, path, used = stack.pop()
            for e, w in adj[v]:
                if e in used or w < s:
                    continue
                if w == s and len(used) >= 1:
                    cyc = frozenset(used + [e])
                    if len(cyc) >= 2:
                        found.add(cyc)
                elif w not in path:
                    stack.append((w, path + [w], used + [e]))
    return found


def _simple_paths(edges, adj, src, dst):
    stack = [(src, [src], [])]
    while stack:
        v, path, used = stack.pop()
        for e, w in adj[v]:
            if e in used:
                continue
            if w == dst:
                yield used + [e]
            elif w not in path:
                stack.append((w, path + [w], used + [e]))


def bao_bonahon_admissible(g, gamma, cap=14):
    """Check the dual-cycle (> 2pi) and dual-path (> pi) angle conditions.

    Returns (ok, violations) where each violation is (kind, edge ids, sum).
    """
    nf = len(g.faces())
    if nf > cap:
        raise PreconditionError("dual graph has %d vertices, above the cap %d" % (nf, cap))
    dual = g.dual()
    viol = []
    for cyc in sorted(_simple_cycles(range(nf), dual), key=sorted):
        s = sum(gamma[e] for e in cyc)
        if not s > 2 * math.pi:
            viol.append(("cycle", tuple(sorted(cyc)), s))
    adj = {f: [] for f in range(nf)}
    for e, (a, b) in dual.items():
        adj[a].append((e, b))
        adj[b].append((e, a))
    seen = set()
    for v in g.vertices:
        tri = set(g.rotation[v])
        corners = {f for e in tri for f in dual[e]}
        for p, q in itertools.combinations(sorted(corners), 2):
            for path in _simple_paths(dual, adj, p, q):
                key = frozenset(path)
                if key in seen or key <= tri:
                    continue
                seen.add(key)
                s = sum(gamma[e] for e in path)
                if not s > math.pi:
                    viol.append(("path", tuple(sorted(path)), s))
    return not viol, viol


# ---------------------------------------------------------------------------
# truncation triangles

def truncation_edge_length(gi, gj, b):
    """Length of the truncation-triangle edge opposite exterior angle b."""
    x = (mpmath.cos(gi) * mpmath.cos(gj) - mpmath.cos(b)) / (mpmath.sin(gi) * mpmath.sin(gj))
    if x < 1:
        if x > 1 - mpf("1e-12"):
            return mpf(0)
        raise PreconditionError("triangle with exterior angles (%g, %g, %g) is not hyperbolic"
                                % (gi, gj, b))
    return mpmath.acosh(x)


# ---------------------------------------------------------------------------
# Murakami-Yano

def gram(t):
    a, b, c, ap, bp, cp = (mpmath.cos(x) for x in t)
    return mpmath.matrix([[1, a, b, cp], [a, 1, c, bp], [b, c, 1, ap], [cp, bp, ap, 1]])


def _exps(t):
    return tuple(-mpmath.expj(-mpf(x)) for x in t)


def z_pm(t):
    """(z_-, z_+) with the sign under the radical taken literally."""
    A, B, C, Ap, Bp, Cp = _exps(t)
    sa, sb, sc, sap, sbp, scp = (mpmath.sin(x) for x in t)
    num = sa * sap + sb * sbp + sc * scp
    den = (A * Ap + B * Bp + C * Cp + A * B * Cp + Ap * B * C + A * Bp * C
           + Ap * Bp * Cp + A * B * C * Ap * Bp * Cp)
    if abs(den) < mpf(10) ** (-30):
        raise NumericalError("degenerate angles: vanishing denominator in z_pm")
    r = mpmath.sqrt(mpmath.det(gram(t)))
    return -2 * (num - r) / den, -2 * (num + r) / den


def _li2(z, label):
    if abs(mpmath.im(z)) < 1e-12 and mpmath.re(z) > 1 - 1e-12 and mpmath.re(z) != 1:
        warnings.warn("dilog argument %s near the cut (term %s); nudged" % (z, label))
        z = z + mpc(0, mpf(10) ** -30)
    return dilog(z)


def muya_U(z, t):
    A, B, C, Ap, Bp, Cp = _exps(t)
    z = mpc(z)
    pos = (z, z * A * B * Ap * Bp, z * A * C * Ap * Cp, z * B * C * Bp * Cp)
    neg = (-z * A * B * C, -z * A * Bp * Cp, -z * Ap * B * Cp, -z * Ap * Bp * C)
    s = sum(_li2(x, i) for i, x in enumerate(pos)) - sum(_li2(x, 4 + i) for i, x in enumerate(neg))
    return s / 2


def muya_Delta(x, y, z):
    x, y, z = mpc(x), mpc(y), mpc(z)
    s = (_li2(-x * y / z, "xy/z") + _li2(-y * z / x, "yz/x") + _li2(-z * x / y, "zx/y")
         + _li2(-1 / (x * y * z), "1/xyz")
         + mpmath.log(x) ** 2 + mpmath.log(y) ** 2 + mpmath.log(z) ** 2)
    return -s / 4


def muya_V(z, t):
    A, B, C, Ap, Bp, Cp = _exps(t)
    L = mpmath.log
    return (muya_Delta(A, B, C) + muya_Delta(A, Bp, Cp) + muya_Delta(Ap, B, Cp)
            + muya_Delta(Ap, Bp, C)
            + (L(A) * L(Ap) + L(B) * L(Bp) + L(C) * L(Cp)) / 2 + muya_U(z, t))


def volume_terms(t):
    """The three expressions whose agreement is the Murakami-Yano statement:
    (Im V(z_-), -Im V(z_+), Im((U(z_-) - U(z_+))/2))."""
    zm, zp = z_pm(t)
    return (mpmath.im(muya_V(zm, t)), -mpmath.im(muya_V(zp, t)),
            mpmath.im((muya_U(zm, t) - muya_U(zp, t)) / 2))


def tet_volume(t, check=True):
    """Volume of the truncated hyperideal tetrahedron with exterior angles t."""
    if not isinstance(t, TetAngles):
        t = TetAngles(*t)
    if not tet_admissible(t):
        raise PreconditionError("angles %s are not admissible" % (tuple(t),))
    if not check:
        zm, zp = z_pm(t)
        v = mpmath.im(muya_V(zm, t))
        return v if v > 0 else -mpmath.im(muya_V(zp, t))
    v1, v2, v3 = volume_terms(t)
    if v1 < 0 and v3 < 0:
        warnings.warn("root labels swapped relative to the literal z_- for %s" % (tuple(t),))
        v1, v2, v3 = -v2, -v1, -v3
    if check:
        tol = mpf("1e-9")
        if abs(v1 - v2) > tol or abs(v1 - v3) > tol:
            raise NumericalError("volume expressions disagree: %s %s %s" % (v1, v2, v3))
    return v1


def schlafli_lengths(t, h=1e-4, volume=None):
    """Interior edge lengths 2 dVol/dgamma_i by fourth-order finite
    differences with step h: the five-point central stencil, or the
    five-point one-sided stencil where a step would leave (0, pi] or the
    admissible set.

    Near-degenerate faces amplify length errors by several orders of
    magnitude in the face holonomy, which is why the stencil order matters.
    """
    vol = volume or (lambda s: tet_volume(s, check=False))
    t = TetAngles(*t)
    cache = {}

    def at(i, k):
        if k == 0:
            key = None
        else:
            key = (i, k)
        if key not in cache:
            u = list(t)
            if k:
                u[i] += k * h
            cache[key] = vol(TetAngles(*u))
        return cache[key]

    def ok(i, k):
        u = list(t)
        u[i] += k * h
        return 0 < u[i] <= math.pi and _adm_raw(u)

    out = []
    for i in range(6):
        if ok(i, 2) and ok(i, -2):
            d = (-at(i, 2) + 8 * at(i, 1) - 8 * at(i, -1) + at(i, -2)) / (12 * h)
        elif all(ok(i, -k) for k in range(1, 5)):
            d = (25 * at(i, 0) - 48 * at(i, -1) + 36 * at(i, -2) - 16 * at(i, -3)
                 + 3 * at(i, -4)) / (12 * h)
        elif all(ok(i, k) for k in range(1, 5)):
            d = (-25 * at(i, 0) + 48 * at(i, 1) - 36 * at(i, 2) + 16 * at(i, 3)
                 - 3 * at(i, 4)) / (12 * h)
        else:
            raise PreconditionError("step h=%g leaves the admissible set on both sides" % h)
        out.append(2 * d)
    return out


def _adm_raw(v):
    a, b, c, ap, bp, cp = v
    return all(s > 2 * math.pi for s in (a + b + c, a + bp + cp, ap + b + cp, ap + bp + c))


# ---------------------------------------------------------------------------
# holonomy

def holonomy_C(l):
    h = mpf(l) / 2
    return mpmath.matrix([[mpmath.cosh(h), mpmath.sinh(h)], [mpmath.sinh(h), mpmath.cosh(h)]])


def holonomy_M():
    r = 1 / mpmath.sqrt(2)
    return mpmath.matrix([[r, -r], [r, r]])


def _resid(P):
    return max(abs(P[0, 0] + 1), abs(P[0, 1]), abs(P[1, 0]), abs(P[1, 1] + 1))


def polygon_holonomy(lengths):
    """Product M C(l_{2p-1}) ... M C(l_0) for a closed right-angled 2p-gon,
    and its distance to -Id."""
    if len(lengths) % 2 or len(lengths) < 6:
        raise PreconditionError("need an even number (>= 6) of side lengths")
    M = holonomy_M()
    P = mpmath.eye(2)
    for l in lengths:
        if l < 0:
            raise PreconditionError("negative side length")
        P = M * holonomy_C(l) * P
    return P, _resid(P)


class FaceCycleData:
    """Around a truncated p-gonal face: interior lengths l_j of e_j, and for
    the truncation leg after e_j the exterior angles (gamma(e_j),
    gamma(e_{j+1}), gamma(b_j)) of the truncation triangle there."""

    def __init__(self, interior, triples):
        if len(interior) != len(triples) or len(interior) < 3:
            raise PreconditionError("face data needs p >= 3 matching lengths and triples")
        self.interior = list(interior)
        self.triples = [tuple(x) for x in triples]

    def truncation_lengths(self):
        return [truncation_edge_length(*tr) for tr in self.triples]

    def sides(self):
        out = []
        for l, t in zip(self.interior, self.truncation_lengths()):
            out += [l, t]
        return out


def face_equation_residual(f):
    return polygon_holonomy(f.sides())[1]


def face_cycle_data(g, gamma, face, lengths, basepoint=None, orientation=1):
    cyc = g.face_cycle(face, basepoint, orientation)
    p = len(cyc)
    triples = [(gamma[cyc[i][0]], gamma[cyc[(i + 1) % p][0]], gamma[cyc[i][1]])
               for i in range(p)]
    return FaceCycleData([lengths[e] for e, _ in cyc], triples)


def tetra_graph_data(t):
    """The standard tetrahedron graph with angle and Schlafli-length maps."""
    g = G.tetrahedron()
    edges = G.tetra_edge_order(g)
    return g, dict(zip(edges, t)), edges


def tet_face_residuals(t, lengths=None, h=1e-4):
    """Face-equation residual for each of the four faces of a tetrahedron;
    ``lengths`` is in TetAngles order (default: Schlafli lengths)."""
    g, gamma, edges = tetra_graph_data(t)
    if lengths is None:
        lengths = schlafli_lengths(t, h)
    lm = dict(zip(edges, lengths))
    return [face_equation_residual(face_cycle_data(g, gamma, f, lm)) for f in range(4)]


def glued_volume(family, gamma):
    """Sum of the constituent tetrahedron volumes of a triangle-move family."""
    total = tet_volume(tet_angles_from_edges(gamma, G.tetra_edge_order(family.base)))
    for r in family.records:
        total += tet_volume(tet_angles_from_edges(gamma, r.sixj_edges()))
    return total


def constituent_angles(family, gamma):
    out = [tet_angles_from_edges(gamma, G.tetra_edge_order(family.base))]
    out += [tet_angles_from_edges(gamma, r.sixj_edges()) for r in family.records]
    return out
