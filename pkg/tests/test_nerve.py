import math

import numpy as np
import pytest

from embolic import SimplicialComplex, build_nerve, circle_space, disjoint_union, simplex_counts
from embolic.exceptions import ComplexFormatError, MultiplicityError
from embolic.goodballs import GoodBall
from embolic.nerve import nerve_from_membership, read_complex, witness_sets, write_complex
from embolic.packing import Packing

import oracles

HOLLOW = SimplicialComplex.from_simplices([(0, 1), (1, 2), (0, 2)])
FILLED = SimplicialComplex.from_simplices([(0, 1, 2)])
TETRA_BOUNDARY = SimplicialComplex.from_simplices([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])


def _packing(centers, R):
    return Packing(tuple(GoodBall(c, R, 0.0, 0.0, 0) for c in centers))


def test_hollow_triangle_nerve(circle300):
    pk = _packing([0, 100, 200], 0.2 * math.pi)
    cx = build_nerve(circle300, pk, dmax=2)
    assert cx.t == (3, 3, 0)
    assert list(cx.t) == oracles.witness_nerve(circle300.dist.tolist(), [0, 100, 200], [0.2 * math.pi] * 3, 2)
    assert cx.simplices[1] == ((0, 1), (0, 2), (1, 2))


def test_single_ball_nerve(circle300):
    cx = build_nerve(circle300, _packing([0], math.pi), dmax=1)
    assert cx.t == (1, 0)


def test_disjoint_components_nerve():
    c = circle_space(30)
    u = disjoint_union([c, c])
    cx = build_nerve(u, _packing([0, 30], math.pi), dmax=1)
    assert cx.t == (2, 0)


def test_simplex_counts():
    assert HOLLOW.t == (3, 3)
    assert FILLED.t == (3, 3, 1)
    assert TETRA_BOUNDARY.t == (4, 6, 4)
    c = simplex_counts(HOLLOW)
    assert c.t0_le_2t1 is True and c.ti_le_t1 is None
    single = SimplicialComplex.from_simplices([(0,)])
    assert simplex_counts(single).t0_le_2t1 is None
    assert simplex_counts(TETRA_BOUNDARY).ti_le_t1 is True


def test_from_simplices_checks():
    with pytest.raises(ValueError, match="not downward closed"):
        SimplicialComplex.from_simplices([(0,), (1,), (0, 1, 2)], close=False)
    with pytest.raises(ValueError):
        SimplicialComplex.from_simplices([(0, 0)])
    with pytest.raises(ValueError):
        SimplicialComplex.from_simplices([(0, 1, 2)], dmax=1)
    cx = SimplicialComplex.from_simplices([(0, 1)], vertex_count=4, dmax=3)
    assert cx.t == (4, 1, 0, 0)
    assert cx.missing_faces() == []


def test_witness_sets_and_cap():
    mem = np.array([[1, 1, 0], [1, 1, 0], [0, 1, 1], [0, 0, 0]], dtype=bool)
    sets, mult, worst = witness_sets(mem)
    assert sorted(sets) == [(0, 1), (1, 2)]
    assert (mult, worst) == (2, 0)
    cx = nerve_from_membership(mem, dmax=2)
    assert cx.t == (3, 2, 0)
    with pytest.raises(MultiplicityError) as exc:
        nerve_from_membership(mem, dmax=2, multiplicity_cap=1)
    assert exc.value.point == 0 and exc.value.size == 2
    assert exc.value.exit_code == 4


def test_nerve_matches_witness_oracle_random():
    rng = np.random.default_rng(2)
    for _ in range(15):
        m = int(rng.integers(5, 30))
        pts = rng.uniform(0, 3, (m, 2))
        d = np.sqrt(((pts[:, None] - pts[None]) ** 2).sum(-1))
        from conftest import make_space

        sp = make_space(d, dim=2, inj=5)
        k = int(rng.integers(1, 6))
        centers = sorted(rng.choice(m, k, replace=False).tolist())
        R = float(rng.uniform(0.2, 0.8))
        cx = build_nerve(sp, _packing(centers, R), dmax=3)
        assert list(cx.t) == oracles.witness_nerve(d.tolist(), centers, [R] * k, 3)


@pytest.mark.parametrize("cx", [HOLLOW, FILLED, TETRA_BOUNDARY], ids=["hollow", "filled", "tetra"])
def test_complex_file_round_trip(tmp_path, cx):
    path = tmp_path / "c.complex"
    write_complex(cx, path)
    assert read_complex(path) == cx


@pytest.mark.parametrize(
    "body, message",
    [
        ("1 2 1\n0\n1\n0 2\n", "vertex id 2"),
        ("1 3 2\n0\n1\n2\n0 1\n", "header counts"),
        ("1 2 1\n0\n1\n1 0\n", "strictly increasing"),
        ("1 2 1\n0\n1\n0 x\n", "non-integer"),
        ("1 2 1\n0\n0\n0 1\n", "duplicate"),
        ("2 3\n0\n1\n2\n", "header"),
        ("", "empty"),
    ],
)
def test_read_complex_errors(tmp_path, body, message):
    path = tmp_path / "bad.complex"
    path.write_text(body)
    with pytest.raises(ComplexFormatError, match=message) as exc:
        read_complex(path)
    assert str(exc.value).startswith("line ")


def test_missing_face_names_line(tmp_path):
    path = tmp_path / "bad.complex"
    path.write_text("2 3 2 1\n0\n1\n2\n0 1\n1 2\n0 1 2\n")
    with pytest.raises(ComplexFormatError, match="face 0 2 missing") as exc:
        read_complex(path)
    assert exc.value.line == 7
