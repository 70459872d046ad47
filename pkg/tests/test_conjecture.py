import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from polyvc import conjecture as C
from polyvc import graphs as G
from polyvc import hypgeom as H
from polyvc import spinnet as S
from polyvc.errors import PreconditionError
from polyvc.qarith import EvalPoint, HalfInt, lobachevsky

PI = math.pi
TET = G.tetrahedron()


def _all(x, g=TET):
    return {e: x for e in g.edges}


@pytest.mark.parametrize("n", [16, 24, 40])
@pytest.mark.parametrize("x", [PI, 3 * PI / 4, 2.6])
def test_growth_rate_sixj_and_state_sum_agree(n, x):
    gamma = _all(x)
    gr, method = C.growth_rate(TET, gamma, n)
    assert method == "sixj"
    c = G.coloring_from_angles(gamma, n)
    v = S.ev_bracket(TET, c, EvalPoint(n))
    with mpmath.workprec(128):
        alt = float(mpmath.pi / n * mpmath.log(abs(v.coeff)))
    assert abs(gr - alt) < 1e-8


def test_growth_rate_approaches_octahedron():
    target = 8 * float(lobachevsky(mpmath.pi / 4))
    g1, _ = C.growth_rate(TET, _all(PI), 100)
    g4, _ = C.growth_rate(TET, _all(PI), 400)
    assert 0 < g1 < target
    assert abs(g4 - target) < abs(g1 - target)


def test_angle_domain_guard():
    with pytest.raises(PreconditionError):
        C.growth_rate(TET, _all(2 * PI), 100)


def test_scan_rows_and_empty():
    assert C.convergence_scan(TET, _all(PI), []) == []
    rows = C.convergence_scan(TET, _all(3 * PI / 4), [100, 200, 400, 800])
    gaps = [r.gap for r in rows]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    for r in rows:
        assert r.gap == abs(r.growth - r.target)
        assert "wall_time" not in r.as_dict() and "wall_time" in r.as_dict(True)


def test_scan_records_failures_and_continues():
    rows = C.convergence_scan(TET, _all(PI), [1, 50], target=3.0)
    assert rows[0].method == "error" and rows[0].error
    assert rows[1].method == "sixj"


def test_scan_needs_target_for_general_graphs():
    with pytest.raises(PreconditionError):
        C.convergence_scan(G.cube(), _all(PI, G.cube()), [20])


def test_family_scan_target():
    fam = G.Family([0])
    rows = C.convergence_scan(fam.graph, _all(PI, fam.graph), [100, 200], family=fam)
    assert abs(rows[0].target - 7.3277247534) < 1e-9
    assert rows[1].gap < rows[0].gap


def test_length_estimates_near_zero_for_ideal_edges():
    ell, info = C.tet_length_estimates((PI,) * 6, 200)
    assert max(abs(x) for x in ell) < 0.05
    assert info["orders"] == [0]


def test_length_estimates_on_one_face():
    ell, _ = C.length_estimates(TET, _all(3 * PI / 4), 200, face=0)
    assert set(ell) == set(TET.face_edges(0))


def test_cycle_perturbations_keep_parity():
    c = G.uniform(TET, 5)
    for d in C.cycle_perturbations(TET):
        cc = {e: HalfInt(twice=c[e].twice + d.get(e, 0)) for e in c}
        assert G.is_admissible(TET, cc)


def test_profile_all_pi():
    s, v, table = C.fs_profile((PI,) * 6)
    assert abs(s - mpmath.pi / 2) < 1e-8
    assert abs(v - 8 * lobachevsky(mpmath.pi / 4)) < 1e-12
    # closed form 4L(s/2) + 4L(pi/2 - s/2) on the grid
    for x, fx in table[::16]:
        ref = 4 * lobachevsky(x / 2) + 4 * lobachevsky(mpmath.pi / 2 - x / 2)
        assert abs(fx - ref) < 1e-12


def test_profile_max_plus_vertex_terms_is_volume():
    t = (3 * PI / 4,) * 6
    _, v, _ = C.fs_profile(t)
    vol = H.tet_volume(t)
    assert abs(v - vol) > 0.5  # the maximum alone is not the volume here
    assert abs(v + C.delta_terms(t) - vol) < 1e-12


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_profile_recovers_volume_on_random_tuples(seed):
    import numpy as np
    t = H.random_admissible(np.random.default_rng(seed), 1)[0]
    assert abs(C.fs_volume(t) - H.tet_volume(t)) < 1e-9


def test_profile_maximizer_is_arg_of_root(rng):
    for t in [(3 * PI / 4,) * 6] + list(H.random_admissible(rng, 3)):
        s, v, _ = C.fs_profile(t)
        zm, _ = H.z_pm(t)
        assert C.fs_root_sign(t) == 1
        assert abs(zm - mpmath.expj(s)) < 1e-6
        assert abs(v - mpmath.im(H.muya_U(zm, t))) < 1e-9


def test_profile_guards():
    with pytest.raises(PreconditionError):
        C.fs_profile((0.5,) * 6)
    with pytest.raises(PreconditionError):
        C.fs_profile((PI,) * 6, s_grid=[-1, 0])


def test_factasymp_zero_and_range():
    rows = C.factasymp_check(0, [10, 20])
    assert all(r.deviation == 0 for r in rows)
    for bad in (1.0, 2.0, -0.1):
        with pytest.raises(PreconditionError):
            C.factasymp_check(bad, [10])


@pytest.mark.parametrize("alpha", [0.3, 0.7, 1.3, 1.7])
def test_factasymp_trend(alpha):
    rows = C.factasymp_check(alpha, [50, 200, 800])
    d = [r.deviation for r in rows]
    assert d[2] < d[1] < d[0]
    assert all(r.phase_error < 1e-9 for r in rows)
