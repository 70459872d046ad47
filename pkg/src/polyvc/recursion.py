"""Circle recursions along a face, the Gordon-Schulten three-term relation,
the asymptotic coefficient matrices and the main matrix-equation residual.

Matrices are indexed by perturbation signs: row = delta(e_{j+1}),
column = delta(e_j), with index 0 for +1/2 and 1 for -1/2.
"""
import itertools

import mpmath
from mpmath import mpc, mpf

from . import graphs as G
from . import spinnet as S
from .errors import InadmissibleError, NumericalError, PreconditionError
from .hypgeom import FaceCycleData, holonomy_C, holonomy_M, truncation_edge_length
from .qarith import GradedComplex, HalfInt, qtable, sqrt_graded, twice_of

SIGNS = (1, -1)  # doubled perturbation values in index order


def _idx(d):
    t = twice_of(d)
    if t == 1:
        return 0
    if t == -1:
        return 1
    raise PreconditionError("perturbation must be +1/2 or -1/2, got %r" % (d,))


class Mat2C:
    """2x2 complex matrix addressed by perturbation signs."""

    __slots__ = ("m",)

    def __init__(self, rows):
        self.m = [[rows[0][0], rows[0][1]], [rows[1][0], rows[1][1]]]

    def __getitem__(self, key):
        r, c = key
        return self.m[_idx(r)][_idx(c)]

    def at(self, r2, c2):
        """Entry by doubled signs (+1 or -1)."""
        return self.m[0 if r2 == 1 else 1][0 if c2 == 1 else 1]

    def entries(self):
        return [self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]]

    def to_mp(self):
        return mpmath.matrix(self.m)

    def det(self):
        return self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]

    def dist(self, other):
        o = other.m if isinstance(other, Mat2C) else [[other[i, j] for j in range(2)] for i in range(2)]
        return max(abs(self.m[i][j] - o[i][j]) for i in range(2) for j in range(2))

    def __repr__(self):
        return "Mat2C(%r)" % (self.m,)


# ---------------------------------------------------------------------------
# the coefficient table

def _entry_args(a2, a12, b2, printed=False):
    """For each (row, col) sign pair: (i-power, numerator args, denominator
    args) of the closed-form entry; arguments are quantum-integer indices.

    Every entry has denominator [2a_j+1][2a_{j+1}+1], which makes the closed
    form equal to the 6j quotient. ``printed`` selects the variant with
    denominators [2a'_j+1][2a'_{j+1}+1] (a' the perturbed colors); it agrees
    in the large-n limit but does not satisfy the recursion exactly.
    """
    a, a1, b = a2, a12, b2  # doubled
    s = (a + a1 + b) // 2
    out = {
        (1, 1): [-1, (s - b + 1, s + 2), (a + 2, a1 + 2)],
        (1, -1): [1, (s - a + 1, s - a1), (a, a1 + 2)],
        (-1, 1): [1, (s - a1 + 1, s - a), (a + 2, a1)],
        (-1, -1): [1, (s - b, s + 1), (a, a1)],
    }
    if not printed:
        for v in out.values():
            v[2] = (a + 1, a1 + 1)
    return out


def _check_triple(a2, a12, b2):
    if not G.admissible_triple(a2, a12, b2):
        raise InadmissibleError("triple (%s, %s, %s) is not admissible" % tuple(
            HalfInt(twice=x) for x in (a2, a12, b2)))


def v_matrix(a_j, a_j1, b_j, A, printed=False):
    """The coefficient matrix V(j) from its closed form at numeric A."""
    a2, a12, b2 = twice_of(a_j), twice_of(a_j1), twice_of(b_j)
    _check_triple(a2, a12, b2)
    tab = qtable(A)
    one = A * 0 + 1
    rows = [[None, None], [None, None]]
    for (r, c), (ip, num, den) in _entry_args(a2, a12, b2, printed).items():
        if min(num) <= 0:
            val = one * 0
        else:
            val = one * (1j if ip == 1 else -1j)
            for k in num:
                val *= tab.sqrt_qint(k)
            for k in den:
                d = tab.sqrt_qint(k)
                if d == 0:
                    raise NumericalError("vanishing denominator sqrt[%d]" % k)
                val /= d
        rows[_idx(HalfInt(twice=r))][_idx(HalfInt(twice=c))] = val
    return Mat2C(rows)


def v_matrix_from_sixj(a_j, a_j1, b_j, A):
    """Each entry as a ratio of two 6j-symbols with a 1/2- resp. 0-colored edge."""
    a2, a12, b2 = twice_of(a_j), twice_of(a_j1), twice_of(b_j)
    _check_triple(a2, a12, b2)
    rows = [[None, None], [None, None]]
    h = HalfInt(twice=1)
    for r, c in itertools.product(SIGNS, SIGNS):
        ap, a1p = a2 + c, a12 + r
        if ap < 0 or a1p < 0 or not G.admissible_triple(ap, a1p, b2):
            val = A * 0
        else:
            H = lambda x: HalfInt(twice=x)
            num = S.sixj((H(a2), H(a12), H(b2), H(a1p), H(ap), h), A)
            den = S.sixj((H(ap), H(a1p), H(b2), H(a1p), H(ap), 0), A)
            if den == 0:
                raise NumericalError("vanishing denominator 6j-symbol")
            val = num / den
        rows[0 if r == 1 else 1][0 if c == 1 else 1] = val
    return Mat2C(rows)


def ev_v_matrix(a_j, a_j1, b_j, pt):
    """Graded value of V(j) at A0; every nonzero entry must have order 0."""
    a2, a12, b2 = twice_of(a_j), twice_of(a_j1), twice_of(b_j)
    _check_triple(a2, a12, b2)
    rows = [[None, None], [None, None]]
    for (r, c), (ip, num, den) in _entry_args(a2, a12, b2).items():
        if min(num) <= 0:
            val = mpc(0)
        else:
            g = GradedComplex(0, 1j if ip == 1 else -1j)
            for k in num:
                g = g * sqrt_graded(k, pt)
            for k in den:
                g = g / sqrt_graded(k, pt)
            if g.order_twice != 0:
                raise NumericalError("entry (%d,%d) has net order %s" % (r, c, g.order))
            val = g.coeff
        rows[0 if r == 1 else 1][0 if c == 1 else 1] = val
    return Mat2C(rows)


def v_limit(g_j, g_j1, b_j):
    """Limit of ev V(j): [[sinh(l/2), -i cosh(l/2)], [-i cosh(l/2), -sinh(l/2)]]
    with l the truncation length for exterior angles (g_j, g_j1, b_j)."""
    h = truncation_edge_length(g_j, g_j1, b_j) / 2
    sh, ch = mpmath.sinh(h), mpmath.cosh(h)
    return Mat2C([[mpc(sh), mpc(0, -ch)], [mpc(0, -ch), mpc(-sh)]])


def v_limit_from_S(g_j, g_j1, b_j):
    """The same limit as R S / sqrt(sin sin) R^-1 U, kept as an independent form."""
    gj, gk, b = mpf(g_j), mpf(g_j1), mpf(b_j)
    p = mpmath.sqrt(mpmath.sin((gj - gk + b) / 2) * mpmath.sin((gk - gj + b) / 2))
    q = mpmath.sqrt(-mpmath.sin((gj + gk - b) / 2) * mpmath.sin((gj + gk + b) / 2))
    Sm = mpmath.matrix([[p, q], [q, p]]) / mpmath.sqrt(mpmath.sin(gj) * mpmath.sin(gk))
    P = R_MAT() * Sm * R_MAT() ** -1 * U_MAT()
    return Mat2C([[P[0, 0], P[0, 1]], [P[1, 0], P[1, 1]]])


def R_MAT():
    return mpmath.matrix([[mpmath.expjpi(mpf(1) / 4), 0], [0, mpmath.expjpi(mpf(-1) / 4)]])


def U_MAT():
    return mpmath.matrix([[0, -1j], [-1j, 0]])


def Q_MAT(l):
    h = mpf(l) / 2
    return mpmath.matrix([[mpmath.exp(h), 0], [0, mpmath.exp(-h)]])


# ---------------------------------------------------------------------------
# circle recursion

class FaceRecursion:
    """Face data for the circle recursion: e_i, b_i and the unperturbed colors."""

    def __init__(self, g, c, face, basepoint=None, orientation=1):
        G.require_admissible(g, c)
        self.g = g
        self.face = face
        self.cyc = g.face_cycle(face, basepoint, orientation)
        t = G.twice_map(g, c)
        self.t = t
        self.a = [t[e] for e, _ in self.cyc]
        self.b = [t[b] for _, b in self.cyc]
        self.edges = [e for e, _ in self.cyc]

    @property
    def p(self):
        return len(self.cyc)

    def matrices(self, A, vfun=v_matrix):
        p = self.p
        Vs = [vfun(HalfInt(twice=self.a[i]), HalfInt(twice=self.a[i + 1]),
                   HalfInt(twice=self.b[i]), A) for i in range(p - 1)]
        Z = vfun(HalfInt(twice=self.a[p - 1]), HalfInt(twice=self.a[0]),
                 HalfInt(twice=self.b[p - 1]), A)
        return Vs, Z


def _k(Vs, signs):
    v = 1
    for i, V in enumerate(Vs):
        v = v * V.at(signs[i + 1], signs[i])
    return v


def recursion_coefficients(g, c, face, basepoint=None, orientation=1, A=None, vfun=v_matrix):
    """(k, Z): k maps each sign tuple (delta(e_0), ..., delta(e_{p-1})) to
    k(c, delta); Z maps (d0, dlast) to the closing coefficient."""
    fr = FaceRecursion(g, c, face, basepoint, orientation)
    Vs, Zm = fr.matrices(A, vfun)
    h = lambda s: HalfInt(twice=s)
    k = {}
    for signs in itertools.product(SIGNS, repeat=fr.p):
        k[tuple(h(s) for s in signs)] = _k(Vs, signs)
    Z = {(h(d0), h(dl)): Zm.at(d0, dl) for d0 in SIGNS for dl in SIGNS}
    return k, Z


def _rel(l, r, floor):
    den = max(abs(l), abs(r), floor)
    return abs(l - r) / den if den else 0.0


def _bracket_fn(g, A, bracket):
    """Bracket callable returning (value, scale). A user-supplied bracket
    gives values only; its scale is then the modulus."""
    if bracket is None:
        return lambda col: S.shadow_bracket_scaled(g, col, A)
    return lambda col: (lambda v: (v, abs(v)))(bracket(col))


def check_circle_recursion(g, c, face, basepoint=None, orientation=1, A=None,
                           bracket=None, floor=1e-300):
    """Largest relative residual of the recursion over the four (d0, dlast).

    The denominator is max(|LHS|, |RHS|, floor, scale), where scale sums the
    moduli of all state weights entering both sides; when the bracket
    vanishes exactly both sides are rounding noise, and this keeps the
    residual at the level of that noise instead of 0/0.
    """
    fr = FaceRecursion(g, c, face, basepoint, orientation)
    Vs, Zm = fr.matrices(A)
    br = _bracket_fn(g, A, bracket)
    base, bscale = br(c)
    worst = 0.0
    for d0, dl in itertools.product(SIGNS, SIGNS):
        lhs = A * 0
        scale = 0.0
        for mid in itertools.product(SIGNS, repeat=fr.p - 2):
            signs = (d0,) + mid + (dl,)
            t = dict(fr.t)
            for e, s in zip(fr.edges, signs):
                t[e] += s
            if min(t.values()) < 0 or not _admissible_t(g, t):
                continue
            kv = _k(Vs, signs)
            if kv != 0:
                v, sc = br({e: HalfInt(twice=x) for e, x in t.items()})
                lhs += kv * v
                scale += abs(kv) * sc
        z = Zm.at(d0, dl)
        rhs = z * base
        scale += abs(z) * bscale
        worst = max(worst, float(_rel(lhs, rhs, max(floor, scale))))
    return worst


def _admissible_t(g, t):
    return all(G.admissible_triple(*(t[x] for x in g.rotation[v])) for v in g.vertices)


def gordon_schulten_check(g, c, face, A, bracket=None, floor=1e-300, basepoint=None):
    """Residual of the three-term relation on a triangular face, in the form
    with the closing coefficients cleared from the denominators:

        sum_s k(c,d_s) k(c+d_s,-d_-s) Z_-s <c + s 1_1>
            = (Z(c,+,+) Z_+ Z_- - sum_s k(c,d_s) k(c+d_s,-d_s) Z_-s) <c>

    where d_s = (1_0 + s 1_1 + 1_2)/2 and Z_s = Z(c+d_s, -, -).
    """
    fr = FaceRecursion(g, c, face, basepoint, 1)
    if fr.p != 3:
        raise PreconditionError("face has %d edges; the three-term relation needs 3" % fr.p)
    br = _bracket_fn(g, A, bracket)
    e0, e1, e2 = fr.edges

    def shift(t, d):
        out = dict(t)
        for e, s in zip((e0, e1, e2), d):
            out[e] += s
        return out

    def col(t):
        return {e: HalfInt(twice=x) for e, x in t.items()}

    def ok(t):
        return min(t.values()) >= 0 and _admissible_t(g, t)

    Vs, Zc = fr.matrices(A)
    kk, zz, kback_same, kback_other = {}, {}, {}, {}
    for s in SIGNS:
        d = (1, s, 1)
        ts = shift(fr.t, d)
        if not ok(ts):
            kk[s], zz[s], kback_same[s], kback_other[s] = 0, 1, 0, 0
            continue
        kk[s] = _k(Vs, d)
        sub = FaceRecursion(g, col(ts), face, e0, 1)
        Vs2, Z2 = sub.matrices(A)
        zz[s] = Z2.at(-1, -1)
        kback_same[s] = _k(Vs2, (-1, -s, -1))
        kback_other[s] = _k(Vs2, (-1, s, -1))
    base, bscale = br(c)
    lhs = A * 0
    scale = 0.0
    for s in SIGNS:
        t1 = dict(fr.t)
        t1[e1] += 2 * s
        if kk[s] == 0 or not ok(t1):
            continue
        v, sc = br(col(t1))
        cf = kk[s] * kback_other[s] * zz[-s]
        lhs += cf * v
        scale += abs(cf) * sc
    coef = Zc.at(1, 1) * zz[1] * zz[-1]
    cscale = abs(coef)
    for s in SIGNS:
        x = kk[s] * kback_same[s] * zz[-s]
        coef -= x
        cscale += abs(x)
    scale += cscale * bscale
    return float(_rel(lhs, coef * base, max(floor, scale)))


# ---------------------------------------------------------------------------
# main matrix equation

def forcing_identity_residual(l):
    """|R^-1 U Q(l) R - M C(l) M| entrywise."""
    R = R_MAT()
    lhs = R ** -1 * U_MAT() * Q_MAT(l) * R
    M = holonomy_M()
    rhs = M * holonomy_C(l) * M
    return max(abs(lhs[i, j] - rhs[i, j]) for i in range(2) for j in range(2))


def main_equation_product(face):
    """prod_{j=p-1..0} R C(t_j) R^-1 U Q(l_j), with t_j the truncation lengths
    and l_j the interior lengths carried by ``face``."""
    R = R_MAT()
    Ri = R ** -1
    U = U_MAT()
    P = mpmath.eye(2)
    for l, t in zip(face.interior, face.truncation_lengths()):
        if l < 0:
            raise PreconditionError("negative length estimate")
        P = R * holonomy_C(t) * Ri * U * Q_MAT(l) * P
    return P


def main_equation_residual(face):
    """||prod + Id||_inf for the product above."""
    if not isinstance(face, FaceCycleData):
        raise PreconditionError("expected FaceCycleData")
    P = main_equation_product(face)
    return max(abs(P[0, 0] + 1), abs(P[0, 1]), abs(P[1, 0]), abs(P[1, 1] + 1))
