"""Input checks shared by the estimator and the CLI."""

from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array, check_symmetric

from .space import MetricMeasureSpace

# "cover-safe" keeps doubled balls (radius <= 0.48 inj) strictly inside inj/2
R0_POLICIES = {"half-inj": 0.5, "quarter-inj": 0.25, "cover-safe": 0.24}


def check_space(X, sample_weight=None, dim=None, inj=None) -> MetricMeasureSpace:
    """Coerce a precomputed distance matrix (or pass through a space) into a space."""
    if isinstance(X, MetricMeasureSpace):
        return X
    if dim is None or inj is None:
        raise ValueError("a precomputed distance matrix needs dim= and inj=")
    d = check_array(X, dtype=np.float64, ensure_min_samples=1, ensure_min_features=1)
    if d.shape[0] != d.shape[1]:
        raise ValueError(f"expected a square distance matrix, got shape {d.shape}")
    d = check_symmetric(d, tol=1e-9 * max(float(d.max()), 1.0), raise_exception=True)
    if sample_weight is None:
        sample_weight = np.ones(d.shape[0])
    w = check_array(sample_weight, ensure_2d=False, dtype=np.float64)
    return MetricMeasureSpace(d, w, dim=dim, inj=inj)


def resolve_R0(policy, inj: float):
    """Return ``(R0, label)`` for a named policy or an explicit radius."""
    if isinstance(policy, str) and policy in R0_POLICIES:
        return R0_POLICIES[policy] * inj, policy
    try:
        R0 = float(policy)
    except (TypeError, ValueError):
        raise ValueError(
            f"R0 must be one of {sorted(R0_POLICIES)} or a positive number, got {policy!r}"
        ) from None
    if not 0 < R0 <= inj / 2:
        raise ValueError(f"explicit R0={R0} must lie in (0, inj/2 = {inj / 2}]")
    return R0, "explicit"


def check_theta_policy(policy):
    if policy == "paper":
        return policy
    try:
        theta = float(policy)
    except (TypeError, ValueError):
        raise ValueError(f"theta must be 'paper' or a nonnegative number, got {policy!r}") from None
    if theta < 0:
        raise ValueError(f"theta must be nonnegative, got {theta}")
    return theta
