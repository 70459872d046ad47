import cmath
import math

import mpmath
import pytest
from hypothesis import assume, given, settings, strategies as st
from mpmath import mpf

from polyvc.errors import BranchError, PreconditionError
from polyvc.qarith import (EvalPoint, GradedComplex, HalfInt, brace_graded, dilog,
                           ev_brace_fact, lobachevsky, qfact, qint, qint_graded,
                           sqrt_graded, sqrt_qint, twice_of)

disk = st.builds(lambda r, t: r * cmath.exp(1j * t),
                 st.floats(0.3, 0.999), st.floats(-math.pi, math.pi))


def test_halfint_parse_and_arith():
    assert HalfInt.of("3/2").twice == 3
    assert HalfInt.of(2) + HalfInt.of("1/2") == HalfInt.of("5/2")
    assert twice_of("7/2") == 7
    with pytest.raises(PreconditionError):
        HalfInt.of("1/3")


@given(st.integers(1, 30), disk)
def test_qint_matches_geometric_sum(k, A):
    ref = sum(A ** (2 * (k - 1 - 2 * j)) for j in range(k))
    assert abs(qint(k, A) - ref) <= 1e-9 * max(1, abs(ref))


@given(st.integers(1, 12), disk)
def test_sqrt_qint_squares_back(k, A):
    s = sqrt_qint(k, A)
    assert abs(s * s - qint(k, A)) <= 1e-9 * max(1, abs(qint(k, A)))


def test_sqrt_qint_positive_near_one():
    for k in range(1, 10):
        s = sqrt_qint(k, 0.999 + 0j)
        assert s.real > 0 and abs(s.imag) < 1e-12


def test_qint_at_fourth_root_of_unity():
    # [k] -> k A^{2k-2} as A^4 -> 1
    for k in range(1, 6):
        assert abs(qint(k, 1j) - k * (1j) ** (2 * k - 2)) < 1e-12


def test_qfact():
    A = 0.8 * cmath.exp(0.2j)
    assert abs(qfact(4, A) - qint(2, A) * qint(3, A) * qint(4, A)) < 1e-12
    assert qfact(0, A) == 1


def test_brace_graded_regular_and_zero():
    pt = EvalPoint(10)
    v = brace_graded(3, pt)
    assert v.order_twice == 0
    assert abs(v.coeff - 2j * mpmath.sinpi(mpf(3) / 10)) < 1e-30
    assert brace_graded(0, pt).is_zero


def test_brace_graded_simple_zero_matches_difference_quotient():
    # {n} vanishes at A0; its w-coefficient against a numeric difference quotient
    n = 10
    pt = EvalPoint(n)
    v = brace_graded(n, pt)
    assert v.order_twice == 2
    with mpmath.workprec(200):
        A0 = mpmath.expjpi(mpf(1) / (2 * n))
        A = A0 * (1 - mpf(10) ** -30)
        num = (A ** (2 * n) - A ** (-2 * n)) / (2 * (A - A0))
        assert abs(num - v.coeff) < 1e-20


@pytest.mark.parametrize("k", [1, 5, 9, 10, 11, 19, 20, 27, 40])
def test_sqrt_graded_squares_to_qint(k):
    pt = EvalPoint(10)
    s = sqrt_graded(k, pt)
    q = qint_graded(k, pt)
    sq = s * s
    assert sq.order_twice == q.order_twice
    assert abs(sq.coeff - q.coeff) < 1e-25 * max(1, abs(q.coeff))


def test_graded_arithmetic():
    a = GradedComplex(2, 3)
    b = GradedComplex(-2, 2)
    assert (a * b).order_twice == 0 and (a * b).coeff == 6
    assert (a + GradedComplex(0, 1)).order_twice == 0


def test_empty_factorial():
    v = ev_brace_fact(0, EvalPoint(7))
    assert v.order_twice == 0 and v.coeff == 1


def test_evalpoint_guards():
    with pytest.raises(PreconditionError):
        EvalPoint(1)
    with pytest.raises(PreconditionError):
        EvalPoint(10, 32)


@settings(max_examples=40)
@given(st.floats(-7, 7))
def test_lobachevsky_against_clausen_oracle(x):
    ref = mpmath.clsin(2, 2 * mpf(x)) / 2
    assert abs(lobachevsky(mpf(x)) - ref) < 1e-25


@settings(max_examples=40)
@given(st.floats(0.01, 3.1))
def test_lobachevsky_duplication_and_symmetry(x):
    x = mpf(x)
    L = lobachevsky
    assert abs(L(2 * x) - 2 * (L(x) + L(x + mpmath.pi / 2))) < 1e-25
    assert abs(L(-x) + L(x)) < 1e-30
    assert abs(L(x + mpmath.pi) - L(x)) < 1e-25


def test_lobachevsky_pi_over_four():
    assert abs(8 * lobachevsky(mpmath.pi / 4) - mpf("3.66386237670887606")) < 1e-16


@settings(max_examples=60)
@given(st.floats(0.05, 3), st.floats(-math.pi, math.pi))
def test_dilog_against_polylog_oracle(r, t):
    z = mpmath.mpc(r * math.cos(t), r * math.sin(t))
    assume(abs(z - 1) > 1e-3 and not (z.real > 1 and abs(z.imag) < 1e-9))
    assert abs(dilog(z) - mpmath.polylog(2, z)) < 1e-25


def test_dilog_refuses_the_cut():
    with pytest.raises(BranchError):
        dilog(mpmath.mpc(2, 0))
