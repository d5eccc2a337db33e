import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from embolic import CoveringNerve, circle_space, flat_torus_space
from embolic.exceptions import MultiplicityError, SpaceValidationError


@pytest.fixture(scope="module")
def circle_fit():
    return CoveringNerve().fit(circle_space(400))


def test_params_round_trip():
    est = CoveringNerve(R0="quarter-inj", field=3, n_jobs=2)
    params = est.get_params()
    assert params["R0"] == "quarter-inj" and params["field"] == 3
    twin = clone(est)
    assert twin.get_params() == params
    assert not hasattr(twin, "report_")
    est.set_params(theta=0.5)
    assert est.theta == 0.5


def test_transform_before_fit():
    with pytest.raises(NotFittedError):
        CoveringNerve().transform(np.zeros((1, 3)))


def test_circle_fit(circle_fit):
    rep = circle_fit.report_
    assert rep.b == [1, 1, 0]
    assert rep.mandatory_ok and rep.R0_policy == "cover-safe"
    assert circle_fit.R0_ == pytest.approx(0.24 * math.pi)
    assert rep.beta_provenance == "empirical"


def test_transform_membership(circle_fit):
    sp = circle_fit.space_
    mem = circle_fit.transform(sp)
    assert mem.shape == (sp.point_count, circle_fit.packing_.N)
    assert set(np.unique(mem)) <= {0.0, 1.0}
    assert (mem.sum(axis=1) >= 1).all()
    assert np.array_equal(mem, circle_fit.fit_transform(sp))
    with pytest.raises(ValueError):
        circle_fit.transform(np.zeros((2, 5)))


def test_fit_precomputed_matrix():
    sp = circle_space(200)
    est = CoveringNerve().fit(np.array(sp.dist), sample_weight=sp.weight, dim=1, inj=math.pi,
                              truth=(1, 1))
    assert est.report_.b == [1, 1, 0] and est.report_.betti_match
    with pytest.raises(ValueError, match="dim= and inj="):
        CoveringNerve().fit(np.array(sp.dist))


def test_invalid_parameters():
    sp = circle_space(200)
    for kwargs in ({"R0": "bogus"}, {"R0": 2.0}, {"theta": -1}, {"theta": "x"}, {"field": 4},
                   {"dmax": 0}, {"beta": -1.0}):
        with pytest.raises(ValueError):
            CoveringNerve(**kwargs).fit(sp)


def test_explicit_theta_and_beta():
    est = CoveringNerve(R0=0.7, theta=0.25, beta=2.0).fit(circle_space(300))
    rep = est.report_
    assert rep.theta == 0.25 and rep.alpha == 5**1.25
    assert rep.beta_provenance == "user" and rep.theta_policy == "explicit"
    assert rep.R0 == 0.7 and rep.R0_policy == "explicit"


def test_invalid_metric_rejected():
    d = np.array([[0, 5, 10], [5, 0, 1], [10, 1, 0]], dtype=float)
    with pytest.raises(SpaceValidationError) as exc:
        CoveringNerve().fit(d, dim=1, inj=1.0)
    assert exc.value.report.worst_triple == (0, 1, 2)


def test_multiplicity_cap():
    with pytest.raises(MultiplicityError):
        CoveringNerve(multiplicity_cap=1).fit(circle_space(300))


def test_undersampled_torus_reports_mismatch():
    rep = CoveringNerve(beta=3.0).fit(flat_torus_space(1, 1, 10, 10)).report_
    assert rep.betti_match is False
    assert rep.b != rep.betti_truth and rep.betti_truth == [1, 2, 1]
    assert not rep.mandatory_ok
