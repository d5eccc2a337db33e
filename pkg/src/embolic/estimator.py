"""Estimator wrapper running the whole covering pipeline as ``fit``."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from ._validation import check_space, check_theta_policy, resolve_R0
from .bounds import CrokeEstimate, assemble_report, compute_theta, croke_estimate
from .goodballs import GoodBallParams, find_good_balls
from .homology import FieldSpec, betti
from .nerve import DEFAULT_MULTIPLICITY_CAP, nerve_from_membership, witness_sets
from .packing import (
    build_packing,
    check_packing,
    counting_chain_check,
    cover_membership,
    five_ball_check,
    intersection_table,
)
from .space import MetricMeasureSpace, require_valid


class CoveringNerve(TransformerMixin, BaseEstimator):
    """Good-ball packing, doubled-ball cover and its nerve for a finite metric-measure space.

    ``fit`` takes either a :class:`MetricMeasureSpace` or a precomputed
    geodesic distance matrix together with ``sample_weight``, ``dim`` and
    ``inj``. ``transform`` maps distances to the fitted sample points onto
    membership in each doubled ball of the cover.

    Parameters
    ----------
    R0 : {"cover-safe", "quarter-inj", "half-inj"} or float
        Radius cap for good balls. ``"cover-safe"`` (0.24 inj) keeps every
        doubled ball strictly inside half the injectivity radius;
        ``"half-inj"`` lets doubled balls reach the injectivity radius.
    theta : "paper" or float
        Growth exponent; ``"paper"`` uses ``sqrt(log_5 rho_hat)``.
    beta : float, optional
        Local volume constant. Estimated from the data when omitted.
    field : int
        Prime characteristic of the coefficient field.
    dmax : int, optional
        Top nerve dimension, default ``dim + 1``.
    multiplicity_cap : int
        Largest witness set whose subsets are enumerated.
    n_jobs : int
        Worker count for the per-point searches and the metric validation.
    """

    def __init__(self, R0="cover-safe", theta="paper", beta=None, field=2, dmax=None,
                 multiplicity_cap=DEFAULT_MULTIPLICITY_CAP, n_jobs=1):
        self.R0 = R0
        self.theta = theta
        self.beta = beta
        self.field = field
        self.dmax = dmax
        self.multiplicity_cap = multiplicity_cap
        self.n_jobs = n_jobs

    def fit(self, X, y=None, sample_weight=None, *, dim=None, inj=None, truth=None):
        space = check_space(X, sample_weight, dim=dim, inj=inj)
        theta_policy = check_theta_policy(self.theta)
        field = FieldSpec(int(self.field))
        n = space.dim
        dmax = n + 1 if self.dmax is None else int(self.dmax)
        if dmax < 1:
            raise ValueError(f"dmax must be at least 1, got {dmax}")

        self.validation_ = require_valid(space, n_jobs=self.n_jobs)
        R0, R0_label = resolve_R0(self.R0, space.inj)
        if self.beta is None:
            croke = croke_estimate(space, R0)
            provenance = "empirical"
        else:
            if not float(self.beta) > 0:
                raise ValueError(f"beta must be positive, got {self.beta}")
            croke = CrokeEstimate(float(self.beta), float("nan"), -1, float("nan"))
            provenance = "user"
        beta = croke.beta
        rho_hat = space.volume / (beta * R0**n)
        if theta_policy == "paper":
            theta, _ = compute_theta(rho_hat)
        else:
            theta = theta_policy
        params = GoodBallParams.from_theta(n, R0, theta)

        good = find_good_balls(space, params, n_jobs=self.n_jobs)
        packing = build_packing(space, good)
        membership = cover_membership(space, packing)
        table = intersection_table(space, packing, membership)
        _, multiplicity, _ = witness_sets(membership)
        cx = nerve_from_membership(membership, dmax, self.multiplicity_cap)
        profile = betti(cx, field)

        stages = {
            "space": space,
            "croke": croke,
            "beta": beta,
            "params": params,
            "good_balls": good,
            "packing": packing,
            "packing_report": check_packing(space, packing),
            "table": table,
            "five_ball": five_ball_check(space, packing, table),
            "chain": counting_chain_check(space, packing, table, params.alpha, beta, R0),
            "complex": cx,
            "betti": profile,
        }
        if truth is None:
            truth = space.betti
        self.report_ = assemble_report(
            stages,
            R0_policy=R0_label,
            theta_policy="paper" if theta_policy == "paper" else "explicit",
            beta_provenance=provenance,
            truth=truth,
            max_multiplicity=multiplicity,
        )
        self.stages_ = stages
        self.space_ = space
        self.R0_ = R0
        self.beta_ = beta
        self.rho_hat_ = rho_hat
        self.theta_ = theta
        self.alpha_ = params.alpha
        self.good_balls_ = good
        self.packing_ = packing
        self.intersections_ = table
        self.complex_ = cx
        self.betti_ = profile
        self.centers_ = packing.centers
        self.radii_ = packing.radii
        self.n_features_in_ = space.point_count
        return self

    def transform(self, X):
        """Rows of distances to the fitted points -> 0/1 membership in each doubled ball."""
        check_is_fitted(self, "centers_")
        if isinstance(X, MetricMeasureSpace):
            X = X.dist
        D = check_array(X, dtype=np.float64)
        if D.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {D.shape[1]} columns, expected distances to {self.n_features_in_} points"
            )
        return (D[:, self.centers_] <= 2 * self.radii_[None, :]).astype(np.float64)
