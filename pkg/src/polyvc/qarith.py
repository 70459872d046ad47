"""Quantum integers, graded evaluation at A0 = exp(i pi/2n), branch-tracked
square roots, and the dilogarithm / Lobachevsky special functions.

Numeric routines are type generic: pass a Python ``complex`` for fast double
precision work or an ``mpmath.mpc`` for extended precision. Graded values
(leading Laurent data at A0) always use mpmath.

Normalization of graded coefficients: the local variable is w = 2(A - A0), so
that the first coefficient of {n} = A^{2n} - A^{-2n} is -2n exp(-i pi/2n).
Half-integer orders come from square roots; their coefficients are taken with
respect to the branch of w^{1/2} that equals sqrt(2 eps) exp(i(pi/2 + pi/4n))
on the inward ray A = (1 - eps) A0.
"""
import cmath
import math
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import mp, mpc, mpf

from .errors import BranchError, CancellationError, FitError, PreconditionError

DEFAULT_PRECISION = 128


# ---------------------------------------------------------------------------
# half integers

class HalfInt:
    """Exact half-integer, stored as twice its value."""

    __slots__ = ("twice",)

    def __init__(self, value=0, twice=None):
        if twice is not None:
            object.__setattr__(self, "twice", int(twice))
            return
        if isinstance(value, HalfInt):
            t = value.twice
        elif isinstance(value, int):
            t = 2 * value
        elif isinstance(value, str):
            t = _parse_half(value)
        else:
            f = Fraction(value) * 2
            if f.denominator != 1:
                raise PreconditionError("%r is not a half-integer" % (value,))
            t = int(f)
        object.__setattr__(self, "twice", t)

    def __setattr__(self, *a):
        raise AttributeError("HalfInt is immutable")

    @classmethod
    def of(cls, value):
        return value if isinstance(value, HalfInt) else cls(value)

    def is_integer(self):
        return self.twice % 2 == 0

    def __repr__(self):
        return "HalfInt(%s)" % self

    def __str__(self):
        if self.twice % 2 == 0:
            return str(self.twice // 2)
        return "%d/2" % self.twice

    def __hash__(self):
        return hash(("HalfInt", self.twice))

    def __eq__(self, other):
        if isinstance(other, HalfInt):
            return self.twice == other.twice
        if isinstance(other, (int, Fraction, float)):
            return Fraction(self.twice, 2) == other
        return NotImplemented

    def _cmp(self, other):
        o = other.twice if isinstance(other, HalfInt) else Fraction(other) * 2
        return (self.twice > o) - (self.twice < o)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __add__(self, other):
        return HalfInt(twice=self.twice + HalfInt.of(other).twice)

    __radd__ = __add__

    def __sub__(self, other):
        return HalfInt(twice=self.twice - HalfInt.of(other).twice)

    def __rsub__(self, other):
        return HalfInt(twice=HalfInt.of(other).twice - self.twice)

    def __neg__(self):
        return HalfInt(twice=-self.twice)

    def __float__(self):
        return self.twice / 2.0

    def __int__(self):
        if self.twice % 2:
            raise ValueError("%s is not an integer" % self)
        return self.twice // 2

    def __index__(self):
        return int(self)

    def as_fraction(self):
        return Fraction(self.twice, 2)


def _parse_half(s):
    s = s.strip()
    try:
        f = Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise PreconditionError("cannot parse %r as a half-integer" % s) from None
    if (2 * f).denominator != 1:
        raise PreconditionError("%r is not a half-integer" % s)
    return int(2 * f)


def twice_of(x):
    """Twice the value of a color given as HalfInt, int, str or Fraction."""
    return HalfInt.of(x).twice


# ---------------------------------------------------------------------------
# evaluation points and graded values

class EvalPoint:
    """The root of unity A0 = exp(i pi / 2n) together with a working precision."""

    __slots__ = ("n", "precision_bits")

    def __init__(self, n, precision_bits=None):
        if precision_bits is None:
            precision_bits = max(mp.prec, DEFAULT_PRECISION)
        n = int(n)
        if n < 2:
            raise PreconditionError("root of unity order must be >= 2, got %d" % n)
        if precision_bits < 64:
            raise PreconditionError("precision must be at least 64 bits")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "precision_bits", int(precision_bits))

    def __setattr__(self, *a):
        raise AttributeError("EvalPoint is immutable")

    def __repr__(self):
        return "EvalPoint(n=%d, precision_bits=%d)" % (self.n, self.precision_bits)

    def __eq__(self, other):
        return (isinstance(other, EvalPoint) and self.n == other.n
                and self.precision_bits == other.precision_bits)

    def __hash__(self):
        return hash((self.n, self.precision_bits))

    def workprec(self):
        return mpmath.workprec(self.precision_bits)

    @property
    def A0(self):
        with self.workprec():
            return mpmath.expjpi(mpf(1) / (2 * self.n))

    def radial(self, eps):
        """The interior point (1 - eps) A0."""
        with self.workprec():
            return (1 - mpf(eps)) * self.A0

    def cancel_threshold(self):
        return mpf(10) ** (-0.15 * self.precision_bits)


class GradedComplex:
    """Leading Laurent datum: coeff * w^(order_twice/2), or the exact zero."""

    __slots__ = ("order_twice", "coeff", "is_zero", "threshold")

    def __init__(self, order_twice=0, coeff=1, is_zero=False, threshold=None):
        if not is_zero and coeff == 0:
            is_zero = True
        object.__setattr__(self, "is_zero", bool(is_zero))
        object.__setattr__(self, "order_twice", 0 if is_zero else int(order_twice))
        object.__setattr__(self, "coeff", mpc(0) if is_zero else mpc(coeff))
        object.__setattr__(self, "threshold", threshold)

    def __setattr__(self, *a):
        raise AttributeError("GradedComplex is immutable")

    @classmethod
    def zero(cls):
        return cls(is_zero=True)

    @classmethod
    def one(cls):
        return cls(0, 1)

    @property
    def order(self):
        return Fraction(self.order_twice, 2)

    def __repr__(self):
        if self.is_zero:
            return "GradedComplex(0)"
        return "GradedComplex(order=%s, coeff=%s)" % (
            self.order, mpmath.nstr(self.coeff, 12))

    def _thr(self, other):
        t = self.threshold if self.threshold is not None else other.threshold
        return t if t is not None else mpf(10) ** (-0.15 * mp.prec)

    def __mul__(self, other):
        if not isinstance(other, GradedComplex):
            if other == 0:
                return GradedComplex.zero()
            return GradedComplex(self.order_twice, self.coeff * other,
                                 self.is_zero, self.threshold)
        if self.is_zero or other.is_zero:
            return GradedComplex.zero()
        return GradedComplex(self.order_twice + other.order_twice,
                             self.coeff * other.coeff, threshold=self.threshold)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, GradedComplex):
            return GradedComplex(self.order_twice, self.coeff / other,
                                 self.is_zero, self.threshold)
        if other.is_zero:
            raise ZeroDivisionError("division by the graded zero")
        if self.is_zero:
            return self
        return GradedComplex(self.order_twice - other.order_twice,
                             self.coeff / other.coeff, threshold=self.threshold)

    def __neg__(self):
        if self.is_zero:
            return self
        return GradedComplex(self.order_twice, -self.coeff, threshold=self.threshold)

    def __add__(self, other):
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.order_twice < other.order_twice:
            return self
        if other.order_twice < self.order_twice:
            return other
        s = self.coeff + other.coeff
        scale = max(abs(self.coeff), abs(other.coeff))
        if abs(s) <= self._thr(other) * scale:
            raise CancellationError(
                "leading coefficients cancel at order %s" % self.order)
        return GradedComplex(self.order_twice, s, threshold=self.threshold)

    def __sub__(self, other):
        return self + (-other)

    def __pow__(self, k):
        k = int(k)
        if self.is_zero:
            if k <= 0:
                raise ZeroDivisionError("zero to a non-positive power")
            return self
        return GradedComplex(self.order_twice * k, self.coeff ** k,
                             threshold=self.threshold)

    def conj(self):
        if self.is_zero:
            return self
        return GradedComplex(self.order_twice, mpmath.conj(self.coeff),
                             threshold=self.threshold)


def graded_sum(terms, threshold=None):
    """Sum graded values, checking cancellation among the dominant terms as a
    whole (pairwise checks would fire on harmless partial cancellations)."""
    terms = [t for t in terms if not t.is_zero]
    if not terms:
        return GradedComplex.zero()
    o = min(t.order_twice for t in terms)
    lead = [t.coeff for t in terms if t.order_twice == o]
    s = mpmath.fsum(lead)
    scale = max(abs(c) for c in lead)
    thr = threshold if threshold is not None else mpf(10) ** (-0.15 * mp.prec)
    if len(lead) > 1 and abs(s) <= thr * scale:
        raise CancellationError("leading coefficients cancel at order %s"
                                % Fraction(o, 2))
    return GradedComplex(o, s)


# ---------------------------------------------------------------------------
# numeric quantum integers

def _is_mp(z):
    return isinstance(z, (mpf, mpc))


def _csqrt(z):
    return mpmath.sqrt(z) if _is_mp(z) else cmath.sqrt(z)


def _check_A(A):
    if A == 0:
        raise PreconditionError("A must be nonzero")


def qint(k, A):
    """[k] = (A^{2k} - A^{-2k}) / (A^2 - A^{-2}); the limit k A^{2k-2} when A^4 = 1."""
    _check_A(A)
    k = int(k)
    if k < 0:
        raise PreconditionError("quantum integers need k >= 0")
    if k == 0:
        return A * 0
    A2 = A * A
    A4 = A2 * A2
    if abs(A4 - 1) < 1e-3:
        # geometric form, exact through A^4 = 1
        return A2 ** (1 - k) * sum(A4 ** j for j in range(k))
    return (A2 ** k - A2 ** (-k)) / (A2 - 1 / A2)


def qfact(k, A):
    """[k]! = [1][2]...[k], with [0]! = 1."""
    _check_A(A)
    r = A * 0 + 1
    for j in range(2, int(k) + 1):
        r *= qint(j, A)
    return r


def sqrt_qint(k, A):
    """Branch-correct sqrt([k]) for A in the closed unit disk.

    Uses [k] = A^{2-2k} prod_{m=1}^{k-1} (1 - A^4 w_k^{-m}) with w_k = exp(2 pi i/k);
    each factor has nonnegative real part for |A| <= 1, so principal roots give
    the holomorphic root that is +sqrt(k) at A = 1.
    """
    _check_A(A)
    k = int(k)
    if k < 0:
        raise PreconditionError("quantum integers need k >= 0")
    if abs(A) > 1 + 1e-12:
        raise BranchError("square-root branch is only tracked for |A| <= 1")
    if k == 0:
        return A * 0
    mpmode = _is_mp(A)
    A4 = A ** 4
    r = A ** (1 - k)
    for m in range(1, k):
        if mpmode:
            om = mpmath.expjpi(-mpf(2 * m) / k)
        else:
            om = cmath.exp(-2j * math.pi * m / k)
        r *= _csqrt(1 - A4 * om)
    return r


def sqrt_qfact(k, A):
    r = A * 0 + 1
    for j in range(2, int(k) + 1):
        r *= sqrt_qint(j, A)
    return r


class QTable:
    """Cached [k], [k]!, sqrt[k] and sqrt([k]!) at a fixed numeric A."""

    def __init__(self, A):
        _check_A(A)
        self.A = A
        one = A * 0 + 1
        self._qint = [A * 0, one]
        self._qfact = [one, one]
        self._sq = [A * 0, one]
        self._sqf = [one, one]

    def _grow(self, k):
        while len(self._qint) <= k:
            j = len(self._qint)
            q = qint(j, self.A)
            self._qint.append(q)
            self._qfact.append(self._qfact[-1] * q)
            s = sqrt_qint(j, self.A)
            self._sq.append(s)
            self._sqf.append(self._sqf[-1] * s)

    def qint(self, k):
        self._grow(k)
        return self._qint[k]

    def qfact(self, k):
        self._grow(k)
        return self._qfact[k]

    def sqrt_qint(self, k):
        self._grow(k)
        return self._sq[k]

    def sqrt_qfact(self, k):
        self._grow(k)
        return self._sqf[k]


_qtables = {}


def qtable(A):
    key = (type(A).__name__, complex(A), getattr(mp, "prec", 53) if _is_mp(A) else 53)
    t = _qtables.get(key)
    if t is None:
        if len(_qtables) > 64:
            _qtables.clear()
        t = _qtables[key] = QTable(A)
    return t


# ---------------------------------------------------------------------------
# graded evaluation at A0

def _check_range(k, pt, what="k"):
    if not 0 <= k < 2 * pt.n:
        raise PreconditionError("%s=%d outside [0, 2n) for n=%d" % (what, k, pt.n))


def brace_graded(k, pt):
    """ev of {k} for any k >= 0 (simple zero when n | k)."""
    k = int(k)
    n = pt.n
    if k == 0:
        return GradedComplex.zero()
    with pt.workprec():
        if k % n:
            return GradedComplex(0, 2j * mpmath.sinpi(mpf(k) / n))
        m = k // n
        return GradedComplex(2, 2 * k * (-1) ** m * mpmath.expjpi(-mpf(1) / (2 * n)))


def ev_brace(k, pt):
    """Graded value of {k} at A0 for 0 <= k < 2n."""
    _check_range(k, pt)
    return brace_graded(k, pt)


def qint_graded(k, pt):
    """Graded value of [k] = {k}/{1} for any k >= 0."""
    return brace_graded(k, pt) / brace_graded(1, pt)


def ev_brace_fact(a, pt):
    """Graded value of {a}! = {1}{2}...{a} for 0 <= a < 2n."""
    _check_range(a, pt, "a")
    r = GradedComplex.one()
    for j in range(1, a + 1):
        r = r * brace_graded(j, pt)
    return r


@lru_cache(maxsize=4096)
def _sqrt_product_graded(k, n, prec):
    # holomorphic root via the product formula, evaluated at A0 itself; the one
    # vanishing factor (present when n | k) contributes its w^{1/2} coefficient.
    with mpmath.workprec(prec):
        A0 = mpmath.expjpi(mpf(1) / (2 * n))
        r = A0 ** (1 - k)
        order = 0
        for m in range(1, k):
            if (m * n) % k == 0 and (m * n) // k == 1:
                order += 1
                r *= mpmath.sqrt(2) * mpmath.expjpi(-(mpf(1) / 2 + mpf(1) / (4 * n)))
                continue
            r *= mpmath.sqrt(1 - mpmath.expjpi(2 * (mpf(1) / n - mpf(m) / k)))
        return order, r


def sqrt_graded(k, pt):
    """Graded sqrt([k]) at A0 for any k >= 0."""
    k = int(k)
    n = pt.n
    if k == 0:
        return GradedComplex.zero()
    if k < 2 * n and k != n:
        with pt.workprec():
            mag = mpmath.sqrt(abs(mpmath.sinpi(mpf(k) / n) / mpmath.sinpi(mpf(1) / n)))
            return GradedComplex(0, mag if k < n else -1j * mag)
    order, c = _sqrt_product_graded(k, n, pt.precision_bits)
    return GradedComplex(order, c)


def sqrt_qint_circle(k, pt):
    """Branch-correct graded sqrt([k]) at A0 for 0 <= k < 2n.

    Positive real for k < n, a positive multiple of -i for n < k < 2n, and
    order 1/2 at k = n (coefficient fixed by the w^{1/2} convention above; it
    squares to the graded [n]).
    """
    _check_range(k, pt)
    return sqrt_graded(k, pt)


class GradedTables:
    """Prefix products of graded [j] and sqrt[j] at one evaluation point.

    Entries are stored as (order_twice, coeff) pairs; mpmath's unbounded
    exponent keeps e^{O(n)} magnitudes exact in scale.
    """

    def __init__(self, pt):
        self.pt = pt
        one = (0, mpc(1))
        self._f = [one, one]
        self._sf = [one, one]
        self._q = [None, one]
        self._sq = [None, one]

    def _grow(self, k):
        if k < len(self._f):
            return
        with self.pt.workprec():
            while len(self._f) <= k:
                j = len(self._f)
                q = qint_graded(j, self.pt)
                self._q.append((q.order_twice, q.coeff))
                o, c = self._f[-1]
                self._f.append((o + q.order_twice, c * q.coeff))

    def _grow_sqrt(self, k):
        if k < len(self._sf):
            return
        with self.pt.workprec():
            while len(self._sf) <= k:
                j = len(self._sf)
                s = sqrt_graded(j, self.pt)
                self._sq.append((s.order_twice, s.coeff))
                o, c = self._sf[-1]
                self._sf.append((o + s.order_twice, c * s.coeff))

    def qfact(self, k):
        self._grow(k)
        return self._f[k]

    def qint(self, k):
        self._grow(k)
        return self._q[k]

    def sqrt_qfact(self, k):
        self._grow_sqrt(k)
        return self._sf[k]

    def sqrt_qint(self, k):
        if k == 0:
            return None
        self._grow_sqrt(k)
        return self._sq[k]


@lru_cache(maxsize=64)
def graded_tables(pt):
    return GradedTables(pt)


# ---------------------------------------------------------------------------
# radial-limit estimation

def radial_fit(func, pt, eps_list=(1e-3, 1e-4, 1e-5), tol=1e-2):
    """Estimate (order_twice, |coeff|) of func near A0 from values on the
    inward ray A = (1 - eps) A0, where |w| = 2 eps.

    The order is the log-log slope rounded to a half-integer; the modulus
    |f| / |w|^m is extrapolated to eps = 0 by the interpolating polynomial
    in eps through all rungs.
    """
    eps_list = sorted(eps_list, reverse=True)
    with pt.workprec():
        logs = []
        for e in eps_list:
            v = abs(func(pt.radial(e)))
            if v == 0:
                raise FitError("function vanishes identically on the ray")
            logs.append((mpmath.log(2 * mpf(e)), mpmath.log(v)))
        slopes = [(logs[i + 1][1] - logs[i][1]) / (logs[i + 1][0] - logs[i][0])
                  for i in range(len(logs) - 1)]
        m2 = int(round(float(2 * slopes[-1])))
        resid = abs(slopes[-1] - mpf(m2) / 2)
        if resid > tol:
            raise FitError("radial ladder did not settle (slope %s)"
                           % mpmath.nstr(slopes[-1], 6))
        mods = [mpmath.exp(lv - mpf(m2) / 2 * lw) for lw, lv in logs]
        # polynomial (Lagrange) extrapolation of the modulus to eps = 0
        es = [mpf(e) for e in eps_list]
        mod = mpf(0)
        for i, ei in enumerate(es):
            wgt = mpf(1)
            for j, ej in enumerate(es):
                if j != i:
                    wgt *= ej / (ej - ei)
            mod += wgt * mods[i]
        return m2, mod, float(resid)


# ---------------------------------------------------------------------------
# special functions

@lru_cache(maxsize=8)
def _bernoulli_table(prec, count):
    with mpmath.workprec(prec):
        return tuple(mpmath.bernoulli(k) for k in range(count))


def _clausen2(x):
    # Cl2(x) for |x| <= pi:
    # x - x log|x| + sum_{k>=1} |B_2k| x^{2k+1} / (2k (2k+1) (2k)!)
    if x == 0:
        return mpf(0)
    eps = mpf(2) ** (-mp.prec - 8)
    s = x - x * mpmath.log(abs(x))
    x2 = x * x
    p = x
    fact = mpf(1)
    B = _bernoulli_table(mp.prec, 400)
    for k in range(1, 199):
        p *= x2
        fact *= (2 * k - 1) * (2 * k)
        t = abs(B[2 * k]) * p / (2 * k * (2 * k + 1) * fact)
        s += t
        if abs(t) < eps * abs(s):
            break
    return s


def lobachevsky(theta):
    """Lobachevsky function L(x) = -int_0^x log|2 sin t| dt.

    Reduced to (-pi/2, pi/2] by pi-periodicity and evaluated as half the
    Clausen function Cl2(2x) through its Bernoulli expansion.
    """
    x = mpf(theta)
    pi = mpmath.pi
    x = x - pi * mpmath.floor(x / pi + mpf(1) / 2)
    if x <= -pi / 2:
        x += pi
    return _clausen2(2 * x) / 2


def _li2_series(z):
    # Bernoulli series in u = -log(1-z); converges for |u| < 2 pi
    u = -mpmath.log(1 - z)
    eps = mpf(2) ** (-mp.prec - 8)
    s = u - u * u / 4
    u2 = u * u
    p = u
    fact = mpf(1)
    B = _bernoulli_table(mp.prec, 400)
    for k in range(1, 199):
        p *= u2
        fact *= (2 * k) * (2 * k + 1)
        t = B[2 * k] * p / fact
        s += t
        if abs(t) < eps * abs(s):
            break
    return s


def dilog(z):
    """Principal dilogarithm Li2(z), cut along [1, inf)."""
    z = mpc(z)
    if z == 0:
        return mpc(0)
    if z.imag == 0 and z.real >= 1:
        if z.real == 1:
            return mpc(mpmath.pi ** 2 / 6)
        raise BranchError("dilog argument %s lies on the cut [1, inf)" % z)
    pi2_6 = mpmath.pi ** 2 / 6
    if abs(z) > 1:
        return -_dilog_disk(1 / z) - pi2_6 - mpmath.log(-z) ** 2 / 2
    return _dilog_disk(z)


def _dilog_disk(z):
    if z == 0:
        return mpc(0)
    if z.real > 0.5:
        if z == 1:
            return mpc(mpmath.pi ** 2 / 6)
        return -_li2_series(1 - z) + mpmath.pi ** 2 / 6 - mpmath.log(z) * mpmath.log(1 - z)
    return _li2_series(z)
