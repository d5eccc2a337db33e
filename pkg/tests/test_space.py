import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from embolic import ball, circle_space, disjoint_union, flat_torus_space, sphere2_space, validate
from embolic.formats import read_space, write_space
from embolic.space import ball_volume

from conftest import make_space


def brute_triangle_defect(d):
    m = len(d)
    worst = 0.0
    for i in range(m):
        for j in range(m):
            for k in range(m):
                worst = max(worst, d[i][k] - d[i][j] - d[j][k])
    return worst


def test_validate_single_point():
    assert validate(make_space([[0.0]])).ok


def test_validate_reports_worst_triangle():
    d = [[0, 5, 10], [5, 0, 1], [10, 1, 0]]
    rep = validate(make_space(d))
    assert not rep.ok
    assert rep.worst_triple == (0, 1, 2)
    assert rep.defect == pytest.approx(4.0)
    assert brute_triangle_defect(d) == pytest.approx(4.0)


def test_validate_flags_asymmetry_and_diagonal():
    rep = validate(make_space([[0, 1], [2, 0]]))
    assert not rep.ok and any("asymmetric" in v for v in rep.violations)
    rep = validate(make_space([[1, 1], [1, 0]]))
    assert any("diagonal" in v for v in rep.violations)


def test_triangle_kernel_agrees_with_brute_force():
    rng = np.random.default_rng(3)
    for _ in range(20):
        a = rng.uniform(0, 1, (7, 7))
        d = (a + a.T) / 2
        np.fill_diagonal(d, 0)
        rep = validate(make_space(d))
        assert rep.defect == pytest.approx(max(brute_triangle_defect(d), 0.0), abs=1e-15)


@pytest.mark.parametrize(
    "space",
    [circle_space(100), sphere2_space(500), flat_torus_space(1, 1, 40, 40)],
    ids=["circle100", "sphere500", "torus40"],
)
def test_generators_pass_validation(space):
    rep = validate(space)
    assert rep.ok, rep.violations
    assert rep.tolerance == pytest.approx(1e-9 * space.diameter)


def test_circle_ball_by_hand():
    sp = circle_space(4)
    b = ball(sp, 0, math.pi / 2)
    assert b.members == {0, 1, 3}
    assert b.volume == pytest.approx(3 * math.pi / 2)


def test_ball_radius_zero_and_whole_space(sphere300):
    b = ball(sphere300, 17, 0.0)
    assert b.members == {17} and b.volume == sphere300.weight[17]
    b = ball(sphere300, 17, sphere300.diameter)
    assert len(b.member_indices) == 300
    assert b.volume == pytest.approx(sphere300.volume)


def test_ball_errors(two_point):
    with pytest.raises(IndexError):
        ball(two_point, 2, 0.5)
    with pytest.raises(ValueError):
        ball(two_point, 0, -1)


def test_circle_generator_facts():
    sp = circle_space(4)
    assert sp.dist[0, 2] == pytest.approx(math.pi)
    assert sp.dist[0, 1] == pytest.approx(math.pi / 2)
    big = circle_space(1000)
    assert big.volume == pytest.approx(2 * math.pi)
    assert big.nearest_neighbor.max() == pytest.approx(2 * math.pi / 1000)
    assert (big.dim, big.inj, big.betti) == (1, math.pi, (1, 1))
    with pytest.raises(ValueError):
        circle_space(2)


def test_sphere_generator_facts():
    sp = sphere2_space(500)
    assert sp.volume == pytest.approx(4 * math.pi)
    assert (sp.dim, sp.inj, sp.betti) == (2, math.pi, (1, 0, 1))
    # antipodal unit vectors: arccos(-1)
    assert math.acos(max(-1.0, min(1.0, -1.0))) == math.pi
    assert sp.diameter <= math.pi
    with pytest.raises(ValueError):
        sphere2_space(3)


def test_flat_torus_generator_facts():
    sp = flat_torus_space(1, 1, 10, 10)
    # (0,0) and (0.9,0) are grid points 0 and 90
    assert sp.dist[0, 90] == pytest.approx(0.1)
    sp = flat_torus_space(1, 2, 4, 4)
    assert sp.inj == 0.5 and sp.volume == pytest.approx(2.0)
    assert sp.betti == (1, 2, 1)
    with pytest.raises(ValueError):
        flat_torus_space(0, 1, 4, 4)
    with pytest.raises(ValueError):
        flat_torus_space(1, 1, 2, 4)


def test_disjoint_union():
    c = circle_space(50)
    u = disjoint_union([c, c], separation=100)
    assert u.point_count == 100
    assert u.betti == (2, 2)
    assert u.dist[0, 50] == 100 and u.dist[3, 7] == c.dist[3, 7]
    assert validate(u).ok
    assert disjoint_union([c]) is c
    s = sphere2_space(200)
    assert disjoint_union([s] * 5).betti == (5, 0, 5)
    with pytest.raises(ValueError):
        disjoint_union([c, s])
    with pytest.raises(ValueError):
        disjoint_union([c, c], separation=2 * c.diameter)


@pytest.mark.parametrize("binary", [False, True])
def test_space_file_round_trip(tmp_path, binary):
    sp = sphere2_space(40)
    path = tmp_path / "s.space"
    write_space(sp, path, binary=binary)
    back = read_space(path)
    assert np.array_equal(back.dist, sp.dist)
    assert np.array_equal(back.weight, sp.weight)
    assert (back.dim, back.inj) == (sp.dim, sp.inj)
    if binary:
        assert path.read_bytes()[:4] == b"EMB1"
    else:
        assert path.read_text().splitlines()[0].split()[:2] == ["40", "2"]


@settings(max_examples=40, deadline=None)
@given(p=st.integers(0, 299), r1=st.floats(0, 4), r2=st.floats(0, 4))
def test_ball_monotone_in_radius(circle300, p, r1, r2):
    lo, hi = sorted((r1, r2))
    a, b = ball(circle300, p, lo), ball(circle300, p, hi)
    assert a.members <= b.members
    assert a.volume <= b.volume


def test_circle_ball_volume_riemann_sum():
    m = 400
    sp = circle_space(m)
    h = 2 * math.pi / m
    for R in np.linspace(0, math.pi - math.pi / m, 97, endpoint=False):
        for p in (0, 123, 399):
            assert abs(ball_volume(sp, p, R) - 2 * R) <= 2 * h
