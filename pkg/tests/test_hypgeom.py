import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mpf

from polyvc import graphs as G
from polyvc import hypgeom as H
from polyvc.errors import PreconditionError
from polyvc.qarith import lobachevsky

PI = math.pi
# Schlafli integration from the regular ideal octahedron along the all-equal
# path, with lengths from Gram cofactors (independent of the dilog formula)
ALL_3PI4_VOLUME = mpf("2.57310546024129170307")
ALL_3PI4_LENGTH = mpf("1.12838396496630108828")

tuples = st.integers(0, 10 ** 6).map(
    lambda s: tuple(H.random_admissible(np.random.default_rng(s), 1)[0]))


def _cof(Gm, i, j):
    M = [[Gm[r, c] for c in range(4) if c != j] for r in range(4) if r != i]
    return (-1) ** (i + j) * mpmath.det(mpmath.matrix(M))


def gram_lengths(t):
    Gm = H.gram(t)
    pairs = ((2, 3), (1, 3), (0, 3), (0, 1), (0, 2), (1, 2))
    return [mpmath.acosh(_cof(Gm, i, j) / mpmath.sqrt(_cof(Gm, i, i) * _cof(Gm, j, j)))
            for i, j in pairs]


def test_octahedron_volume():
    v = H.tet_volume((PI,) * 6)
    assert abs(v - 8 * lobachevsky(mpmath.pi / 4)) < 1e-12
    assert abs(v - mpf("3.66386237670887606")) < 1e-15


def test_all_three_quarter_pi_against_schlafli_integration():
    assert abs(H.tet_volume((3 * PI / 4,) * 6) - ALL_3PI4_VOLUME) < 1e-15
    for l in H.schlafli_lengths((3 * PI / 4,) * 6):
        assert abs(l - ALL_3PI4_LENGTH) < 1e-7


def test_schlafli_integration_oracle_reproduces_frozen_value():
    with mpmath.workdps(25):
        def ell(th):
            return gram_lengths((mpmath.pi - th,) * 6)[0]
        v = 8 * lobachevsky(mpmath.pi / 4) - 3 * mpmath.quad(ell, [mpf(10) ** -20, mpmath.pi / 4])
    assert abs(v - ALL_3PI4_VOLUME) < 1e-18


@settings(max_examples=15, deadline=None)
@given(tuples)
def test_schlafli_lengths_match_gram_cofactors(t):
    for a, b in zip(H.schlafli_lengths(t), gram_lengths(t)):
        assert abs(a - b) < 1e-4 * max(1, abs(b))


@settings(max_examples=20, deadline=None)
@given(tuples)
def test_murakami_yano_three_ways(t):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        v1, v2, v3 = H.volume_terms(t)
    assert abs(abs(v1) - abs(v2)) < 1e-9 and abs(abs(v1) - abs(v3)) < 1e-9
    zm, zp = H.z_pm(t)
    if mpmath.det(H.gram(t)) < 0:
        assert abs(abs(zm) - 1) < 1e-10 and abs(abs(zp) - 1) < 1e-10


@settings(max_examples=10, deadline=None)
@given(tuples)
def test_volume_invariant_under_tetrahedral_symmetries(t):
    a, b, c, ap, bp, cp = t
    v = H.tet_volume(t)
    for s in ((b, c, a, bp, cp, ap), (a, bp, cp, ap, b, c), (b, a, c, bp, ap, cp)):
        assert abs(H.tet_volume(s) - v) < 1e-9


def test_volume_positive_and_below_octahedron(rng):
    for t in H.random_admissible(rng, 10):
        v = H.tet_volume(t)
        assert 0 < v < H.tet_volume((PI,) * 6)


def test_angle_guards():
    with pytest.raises(PreconditionError):
        H.TetAngles(4, 3, 3, 3, 3, 3)
    with pytest.raises(PreconditionError):
        H.tet_volume((0.5,) * 6)


def test_bao_bonahon():
    g = G.tetrahedron()
    ok, viol = H.bao_bonahon_admissible(g, {e: PI for e in g.edges})
    assert ok and not viol
    ok, viol = H.bao_bonahon_admissible(g, {e: 0.6 for e in g.edges})
    assert not ok and "cycle" in {k for k, _, _ in viol}
    c = G.cube()
    ok, _ = H.bao_bonahon_admissible(c, {e: 3 * PI / 4 for e in c.edges})
    assert ok


def test_bao_bonahon_agrees_with_vertex_sums(rng):
    g, _, edges = H.tetra_graph_data((PI,) * 6)
    for _ in range(30):
        t = tuple(rng.uniform(1.2, PI, 6))
        ok, _ = H.bao_bonahon_admissible(g, dict(zip(edges, t)))
        assert ok == H.tet_admissible(H.TetAngles(*t))


def test_truncation_length():
    # exterior 2pi/3 everywhere is the Euclidean equilateral triangle: length 0
    assert H.truncation_edge_length(2 * PI / 3, 2 * PI / 3, 2 * PI / 3) == 0
    # interior angles pi/4: cosh l = (c^2 + c)/s^2 with c = cos pi/4
    c = math.cos(PI / 4)
    ref = math.acosh((c * c + c) / (1 - c * c))
    assert abs(H.truncation_edge_length(3 * PI / 4, 3 * PI / 4, 3 * PI / 4) - ref) < 1e-14
    with pytest.raises(PreconditionError):
        H.truncation_edge_length(PI / 2, PI / 2, PI / 2)


def test_regular_right_angled_hexagon_closes():
    s = mpmath.acosh(2)
    _, r = H.polygon_holonomy([s] * 6)
    assert r < 1e-14
    _, r = H.polygon_holonomy([s + 0.1] * 6)
    assert r > 1e-2


def test_face_residuals_small_with_schlafli_lengths(rng):
    for t in H.random_admissible(rng, 5):
        assert max(H.tet_face_residuals(t)) < 1e-4


def test_face_residual_is_rigid():
    t = (3 * PI / 4,) * 6
    base = [float(x) for x in H.schlafli_lengths(t)]
    for i in range(6):
        ls = list(base)
        ls[i] += 0.2
        assert max(H.tet_face_residuals(t, ls)) > 1e-2


def test_face_data_orientation_and_basepoint_do_not_matter():
    g, gamma, edges = H.tetra_graph_data((2.5, 2.6, 2.7, 2.4, 2.8, 2.3))
    lm = dict(zip(edges, H.schlafli_lengths(H.TetAngles(2.5, 2.6, 2.7, 2.4, 2.8, 2.3))))
    ref = H.face_equation_residual(H.face_cycle_data(g, gamma, 0, lm))
    for e in g.face_edges(0):
        for o in (1, -1):
            r = H.face_equation_residual(H.face_cycle_data(g, gamma, 0, lm, e, o))
            assert r < 1e-4 and abs(r - ref) < 1e-4


def test_glued_volume_additive():
    fam = G.Family([0])
    gamma = {e: PI for e in fam.graph.edges}
    v = H.glued_volume(fam, gamma)
    assert v == 2 * H.tet_volume((PI,) * 6)
    assert abs(v - mpf("7.3277247534177521")) < 1e-14
    fam2 = G.Family([0, 4])
    gamma = {e: 3 * PI / 4 if e % 2 else PI for e in fam2.graph.edges}
    parts = H.constituent_angles(fam2, gamma)
    assert len(parts) == 3
    assert H.glued_volume(fam2, gamma) == sum(H.tet_volume(p) for p in parts)
