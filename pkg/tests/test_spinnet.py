import cmath
import itertools
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import Rational
from sympy.physics.wigner import wigner_6j

from polyvc import graphs as G
from polyvc import spinnet as S
from polyvc.errors import InadmissibleError, PreconditionError
from polyvc.qarith import EvalPoint, HalfInt

from conftest import circle


def _adm_six(maxt):
    for t in itertools.product(range(maxt + 1), repeat=6):
        try:
            yield S.SixJInput([HalfInt(twice=x) for x in t])
        except PreconditionError:
            continue


def test_classical_limit_matches_wigner_oracle():
    # at A = 1 the unitary symbol is the Wigner 6j up to i^(sum of doubled colors)
    count = 0
    for s in _adm_six(3):
        a, b, c, d, e, f = (Rational(x, 2) for x in s.twice)
        w = complex(float(wigner_6j(a, b, c, d, e, f)))
        v = complex(S.sixj(s, 1 + 0j))
        assert abs(v - 1j ** sum(s.twice) * w) < 1e-12
        count += 1
    assert count == 181


TET_SYMS = [(0, 1, 2, 3, 4, 5), (1, 2, 0, 4, 5, 3), (0, 4, 5, 3, 1, 2),
            (3, 4, 2, 0, 1, 5), (1, 0, 2, 4, 3, 5)]


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(list(_adm_six(4))), st.sampled_from(TET_SYMS))
def test_sixj_tetrahedral_symmetry(s, perm):
    A = 0.93 * cmath.exp(0.41j)
    moved = [s.twice[i] for i in perm]
    v = S.sixj(s, A)
    w = S.sixj([HalfInt(twice=x) for x in moved], A)
    assert abs(v - w) <= 1e-12 * max(1, abs(v))


def test_sixj_rejects_inadmissible():
    with pytest.raises(InadmissibleError):
        S.SixJInput([1, 1, 3, 1, 1, 1])
    with pytest.raises(PreconditionError):
        S.SixJInput([1, 1, 1])


def test_unknot():
    A = 0.9 * cmath.exp(0.3j)
    assert abs(S.unknot_value("1/2", A) + (A ** 2 + A ** -2)) < 1e-12


def test_shadow_sum_is_sixj_on_tetrahedron():
    g = G.tetrahedron()
    order = G.tetra_edge_order(g)
    A = circle(13)
    for col in G.enumerate_colorings(g, 3):
        c = {e: HalfInt(twice=x) for e, x in col.items()}
        a = S.shadow_bracket(g, c, A)
        b = S.sixj([c[e] for e in order], A)
        assert abs(a - b) <= 1e-10 * max(abs(b), 1e-12)


@pytest.mark.parametrize("name", ["tetrahedron", "theta", "prism"])
def test_external_region_invariance(name):
    g = getattr(G, name)()
    A = 0.95 * cmath.exp(0.2j)
    for col in G.enumerate_colorings(g, 2):
        c = {e: HalfInt(twice=x) for e, x in col.items()}
        assert S.shadow_bracket_invariance_check(g, c, A) < 1e-10


def test_scaled_bracket_scale_bounds_value():
    g = G.cube()
    c = G.uniform(g, 1)
    v, scale = S.shadow_bracket_scaled(g, c, circle(20))
    assert abs(v) <= scale + 1e-15


def test_ev_sixj_matches_radial_limit():
    # order-0 graded values are the limit of the numeric symbol along the radius
    pt = EvalPoint(9)
    for cols in ([2, 2, 2, 2, 2, 2], [3, 4, 1, 3, 4, 1], [4, 4, 4, 3, 3, 3]):
        v = S.ev_sixj([HalfInt(c) for c in cols], pt)
        if v.order_twice:
            continue
        with mpmath.workprec(160):
            A = pt.A0 * (1 - mpmath.mpf(10) ** -25)
            num = S.sixj([HalfInt(c) for c in cols], A)
        assert abs(num - v.coeff) < 1e-18


def test_ev_bracket_graded_equals_sixj_route():
    g = G.tetrahedron()
    order = G.tetra_edge_order(g)
    pt = EvalPoint(12)
    for cols in ([6] * 6, [5, 5, 5, 4, 4, 4], [7, 7, 6, 7, 7, 6]):
        c = dict(zip(order, (HalfInt(x) for x in cols)))
        if not G.is_admissible(g, c):
            continue
        a = S.ev_bracket(g, c, pt)
        b = S.ev_sixj([c[e] for e in order], pt)
        assert a.order_twice == b.order_twice
        assert abs(a.coeff - b.coeff) < 1e-25 * max(1, abs(b.coeff))


def test_radial_and_graded_agree_in_modulus():
    g = G.tetrahedron()
    pt = EvalPoint(10)
    c = G.uniform(g, 3)
    a = S.ev_bracket_graded(g, c, pt)
    b = S.ev_bracket_radial(g, c, pt)
    assert a.order_twice == b.order_twice
    assert abs(abs(a.coeff) - abs(b.coeff)) < 1e-3 * abs(a.coeff)


def test_bracket_family_factorizes():
    fam = G.Family([0])
    g = fam.graph
    A = circle(17)
    n = 0
    for col in G.enumerate_colorings(g, 2):
        c = {e: HalfInt(twice=x) for e, x in col.items()}
        a = S.bracket_family(fam, c, A)
        b = S.shadow_bracket(g, c, A)
        assert abs(a - b) <= 1e-10 * max(abs(b), 1e-12)
        n += 1
    assert n > 50


def test_compiled_brackets_match(rng):
    from polyvc._fast import BatchEngine
    g = G.cube()
    A = circle(25)
    eng = BatchEngine(g, A, 4)
    cols = eng.colorings(3)
    pick = cols[rng.choice(len(cols), 40, replace=False)]
    fast = eng.brackets(pick)
    for row, v in zip(pick, fast):
        c = {e: HalfInt(twice=int(x)) for e, x in zip(g.edges, row)}
        ref = S.shadow_bracket(g, c, A)
        assert abs(v - ref) <= 1e-12 * max(1, abs(ref))
