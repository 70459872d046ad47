import cmath
import itertools
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polyvc import graphs as G
from polyvc import hypgeom as H
from polyvc import recursion as R
from polyvc.errors import InadmissibleError, PreconditionError
from polyvc.qarith import EvalPoint, HalfInt

from conftest import circle

h = lambda x: HalfInt(twice=x)


def _triples(maxt):
    for a, a1, b in itertools.product(range(maxt + 1), repeat=3):
        if G.admissible_triple(a, a1, b):
            yield a, a1, b


def test_closed_form_equals_sixj_quotient():
    for n in (20, 31):
        A = circle(n)
        for a, a1, b in _triples(6):
            V = R.v_matrix(h(a), h(a1), h(b), A)
            W = R.v_matrix_from_sixj(h(a), h(a1), h(b), A)
            assert V.dist(W) < 1e-10


def test_printed_denominators_differ_at_finite_n_and_agree_in_the_limit():
    # along colors growing with n the two variants share their limit
    gaps = []
    for n in (20, 200, 2000):
        a, a1, b = h(2 * (5 * n // 8)), h(2 * (5 * n // 8)), h(2 * (5 * n // 8))
        A = circle(n)
        gaps.append(R.v_matrix(a, a1, b, A, printed=True).dist(R.v_matrix(a, a1, b, A)))
    assert gaps[0] > 1e-2
    assert gaps[2] < gaps[1] < gaps[0]
    assert gaps[2] < 1e-2


def test_index_orientation_pinned_by_vanishing_column():
    # a_j = 0 cannot be lowered, so the column of delta(e_j) = -1/2 is zero
    V = R.v_matrix(h(0), h(1), h(1), circle(30))
    assert V.at(1, -1) == 0 and V.at(-1, -1) == 0
    assert V.at(1, 1) != 0 and V.at(-1, 1) != 0
    # and a_{j+1} = 0 kills the row of delta(e_{j+1}) = -1/2
    V = R.v_matrix(h(1), h(0), h(1), circle(30))
    assert V.at(-1, 1) == 0 and V.at(-1, -1) == 0


def test_inadmissible_triple_rejected():
    with pytest.raises(InadmissibleError):
        R.v_matrix(h(1), h(1), h(1), circle(10))


def test_graded_matrix_matches_numeric_on_circle():
    pt = EvalPoint(40)
    for a, a1, b in [(10, 12, 8), (30, 31, 27), (5, 5, 0)]:
        g = R.ev_v_matrix(h(a), h(a1), h(b), pt)
        v = R.v_matrix(h(a), h(a1), h(b), complex(pt.A0))
        assert g.dist(v) < 1e-10


@settings(max_examples=40)
@given(st.floats(1.6, 3.1), st.floats(1.6, 3.1), st.floats(1.6, 3.1))
def test_limit_matrix_det_and_second_form(x, y, z):
    if x + y + z <= 2 * math.pi + 1e-3:
        return
    V = R.v_limit(x, y, z)
    assert abs(V.det() - 1) < 1e-12
    assert V.dist(R.v_limit_from_S(x, y, z)) < 1e-12


@pytest.mark.parametrize("gamma", [(3 * math.pi / 4,) * 3, (2.6, 2.8, 2.5)])
def test_graded_matrix_converges_at_rate_one_over_n(gamma):
    errs = []
    for n in (100, 400, 1600):
        c = G.coloring_from_angles(dict(enumerate(gamma)), n)
        back = [2 * math.pi * (1 - float(c[i]) / n) for i in range(3)]
        V = R.ev_v_matrix(c[0], c[1], c[2], EvalPoint(n))
        errs.append(float(V.dist(R.v_limit(*back))))
    for e0, e1 in zip(errs, errs[1:]):
        assert 1 / 8 <= e1 / e0 <= 1


def _all_faces_residual(g, c, A, **kw):
    return max(R.check_circle_recursion(g, c, f, orientation=o, A=A, **kw)
               for f in range(len(g.faces())) for o in (1, -1))


@pytest.mark.parametrize("n", [40, 50, 70])
def test_circle_recursion_tetrahedron(n):
    from polyvc._fast import BatchEngine
    eng = BatchEngine(G.tetrahedron(), circle(n), 6)
    cols = eng.colorings(5)
    assert eng.recursion_residuals(cols).max() < 1e-9


@pytest.mark.parametrize("n", [40, 70])
def test_circle_recursion_prism(n, rng):
    g = G.prism()
    A = circle(n)
    cols = [d for d in G.enumerate_colorings(g, 3)]
    for i in rng.choice(len(cols), 25, replace=False):
        c = {e: h(x) for e, x in cols[i].items()}
        assert _all_faces_residual(g, c, A) < 1e-9


def test_recursion_independent_of_basepoint():
    g = G.cube()
    A = circle(50)
    c = next({e: h(x) for e, x in d.items()} for d in G.enumerate_colorings(g, 3)
             if min(d.values()) > 0 and len(set(d.values())) > 1)
    for e in g.face_edges(0):
        for o in (1, -1):
            assert R.check_circle_recursion(g, c, 0, e, o, A) < 1e-9


def test_recursion_detects_wrong_coefficients():
    # the printed denominators are off by a dimension factor; the check must see it
    g = G.tetrahedron()
    A = circle(20)
    c = G.uniform(g, 1)
    fr = R.FaceRecursion(g, c, 0)
    Vs, Zm = fr.matrices(A, lambda *a: R.v_matrix(*a, printed=True))
    lhs = 0
    for mid in R.SIGNS:
        signs = (1, mid, 1)
        t = dict(fr.t)
        for e, s in zip(fr.edges, signs):
            t[e] += s
        cc = {e: h(x) for e, x in t.items()}
        if G.is_admissible(g, cc):
            from polyvc.spinnet import shadow_bracket
            lhs += R._k(Vs, signs) * shadow_bracket(g, cc, A)
    from polyvc.spinnet import shadow_bracket
    rhs = Zm.at(1, 1) * shadow_bracket(g, c, A)
    assert abs(lhs - rhs) > 1e-3 * abs(rhs)
    assert R.check_circle_recursion(g, c, 0, A=A) < 1e-12


def test_zero_bracket_coloring_is_not_reported_as_failure():
    # a zero-colored edge splits this cube coloring into pieces; the bracket
    # vanishes exactly and both sides of the recursion are rounding noise
    g = G.cube()
    c = {e: h(x) for e, x in zip(g.edges, [0, 1, 0, 1, 0, 1, 2, 1, 1, 1, 1, 1])}
    A = cmath.exp(1j * math.pi / 100)
    assert _all_faces_residual(g, c, A) < 1e-9


def test_compiled_residuals_match_python(rng):
    from polyvc._fast import BatchEngine
    g = G.cube()
    A = cmath.exp(1j * math.pi / 100)
    eng = BatchEngine(g, A, 4)
    cols = eng.colorings(3)
    pick = cols[rng.choice(len(cols), 6, replace=False)]
    fast = eng.recursion_residuals(pick)
    for row, r in zip(pick, fast):
        c = {e: h(int(x)) for e, x in zip(g.edges, row)}
        assert r < 1e-9
        assert _all_faces_residual(g, c, A) < 1e-9


def test_compiled_engine_guards():
    from polyvc._fast import BatchEngine
    eng = BatchEngine(G.tetrahedron(), circle(20), 3)
    with pytest.raises(PreconditionError):
        eng.recursion_residuals(np.full((1, 6), 3))
    with pytest.raises(PreconditionError):
        BatchEngine(G.prism(), circle(20), 3)


def test_gordon_schulten_tetrahedron():
    g = G.tetrahedron()
    A = circle(50)
    worst = 0.0
    for col in G.enumerate_colorings(g, 4):
        c = {e: h(x) for e, x in col.items()}
        for f in range(4):
            worst = max(worst, R.gordon_schulten_check(g, c, f, A))
    assert worst < 1e-9


def test_gordon_schulten_needs_triangle():
    g = G.cube()
    with pytest.raises(PreconditionError):
        R.gordon_schulten_check(g, G.uniform(g, 1), 0, circle(20))


@settings(max_examples=30)
@given(st.floats(0, 6))
def test_forcing_identity(l):
    assert R.forcing_identity_residual(l) < 1e-12


def test_main_equation_with_schlafli_lengths(rng):
    for t in [(3 * math.pi / 4,) * 6] + list(H.random_admissible(rng, 4)):
        g, gamma, edges = H.tetra_graph_data(t)
        lm = dict(zip(edges, H.schlafli_lengths(t)))
        for f in range(4):
            assert R.main_equation_residual(H.face_cycle_data(g, gamma, f, lm)) < 1e-4


def test_main_equation_zero_lengths_boundary():
    g, gamma, edges = H.tetra_graph_data((math.pi,) * 6)
    fd = H.face_cycle_data(g, gamma, 0, {e: 0 for e in edges})
    # exterior angle pi everywhere makes the truncation triangles ideal, so
    # their legs blow up; the residual is still computed
    assert min(fd.truncation_lengths()) > 30
    assert R.main_equation_residual(fd) > 0
    with pytest.raises(PreconditionError):
        R.main_equation_residual([1, 2, 3])


def test_v_222_near_classical_limit():
    two = HalfInt(2)
    A = cmath.exp(1e-7j)
    V = R.v_matrix(two, two, two, A)
    assert abs(complex(V.m[0][0]) + 1j * math.sqrt(24 / 25)) < 1e-9
    # the uncorrected table lands on sqrt(6)/3 instead
    P = R.v_matrix(two, two, two, A, printed=True)
    assert abs(complex(P.m[0][0]) + 1j * math.sqrt(6) / 3) < 1e-9
