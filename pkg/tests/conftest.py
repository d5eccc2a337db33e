import numpy as np
import pytest

from embolic import MetricMeasureSpace, circle_space, flat_torus_space, sphere2_space


def make_space(dist, weight=None, dim=1, inj=1.0):
    dist = np.asarray(dist, dtype=float)
    if weight is None:
        weight = np.ones(dist.shape[0])
    return MetricMeasureSpace(dist, weight, dim=dim, inj=inj)


@pytest.fixture(scope="session")
def circle1000():
    return circle_space(1000)


@pytest.fixture(scope="session")
def circle300():
    return circle_space(300)


@pytest.fixture(scope="session")
def sphere300():
    return sphere2_space(300)


@pytest.fixture(scope="session")
def torus40():
    return flat_torus_space(1, 1, 40, 40)


@pytest.fixture
def two_point():
    return make_space([[0, 1], [1, 0]])


@pytest.fixture
def heavy_cluster():
    """100 points at mutual distance 0.01 plus one point at distance 10 (index 100)."""
    m = 101
    d = np.full((m, m), 0.01)
    d[100, :] = d[:, 100] = 10.0
    np.fill_diagonal(d, 0.0)
    return make_space(d, dim=1, inj=10.0)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
