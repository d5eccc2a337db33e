"""Good balls: the largest radius at each point whose 5x-enlargement grows by at most alpha."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .space import MetricMeasureSpace, ball_volume

# relative gap below which a vectorised volume comparison is redone exactly
_TIE_RTOL = 1e-9


@dataclass(frozen=True)
class GoodBallParams:
    R0: float
    theta: float
    alpha: float

    def __post_init__(self):
        if not self.R0 > 0:
            raise ValueError(f"R0 must be positive, got {self.R0}")
        if self.theta < 0:
            raise ValueError(f"theta must be nonnegative, got {self.theta}")
        if not self.alpha >= 1:
            raise ValueError(f"alpha must be at least 1, got {self.alpha}")

    @classmethod
    def from_theta(cls, dim, R0, theta):
        return cls(float(R0), float(theta), 5.0 ** (dim + theta))


@dataclass(frozen=True)
class GoodBall:
    center: int
    radius: float
    vol_R: float
    vol_5R: float
    scale_index: int
    degenerate: bool = False


def growth_ok(space: MetricMeasureSpace, p: int, R: float, alpha: float) -> bool:
    """True iff ``vol(B(p, 5R)) <= alpha * vol(B(p, R))``."""
    if not R > 0:
        raise ValueError(f"radius must be positive, got {R}")
    return ball_volume(space, p, 5 * R) <= alpha * ball_volume(space, p, R)


def scale_index(radius: float, R0: float) -> int:
    """Index ``k`` of the bracket ``(5**-k * R0, 5**(1-k) * R0]`` holding ``radius``; 0 at R0."""
    if not 0 < radius <= R0:
        raise ValueError(f"radius {radius} outside (0, R0={R0}]")
    if radius == R0:
        return 0
    k = max(1, int(math.floor(math.log(R0 / radius, 5))) + 1)
    # float log can land one bracket off at the boundaries
    while not R0 / 5**k < radius:
        k += 1
    while k > 1 and not radius <= R0 / 5 ** (k - 1):
        k -= 1
    return k


def candidate_radii(space: MetricMeasureSpace, p: int, R0: float) -> np.ndarray:
    """Sorted candidates: nearest-neighbour distance / 6, every distance in (0, R0], and R0."""
    row = space.dist[p]
    cands = [row[(row > 0) & (row <= R0)], [R0]]
    fallback = space.nearest_neighbor[p] / 6
    if fallback <= R0:
        cands.append([fallback])
    return np.unique(np.concatenate(cands))


def find_good_ball(space: MetricMeasureSpace, p: int, params: GoodBallParams) -> GoodBall:
    """Largest candidate radius at ``p`` that satisfies the growth condition."""
    if space.point_count == 1:
        return GoodBall(int(p), params.R0, space.volume, space.volume, 0, degenerate=True)
    cands = candidate_radii(space, p, params.R0)
    srt, cum = space.profile
    srt, cum = srt[p], cum[p]
    vol_r = cum[np.searchsorted(srt, cands, side="right") - 1]
    vol_5r = cum[np.searchsorted(srt, 5 * cands, side="right") - 1]
    lhs, rhs = vol_5r, params.alpha * vol_r
    ok = lhs <= rhs
    near = np.abs(lhs - rhs) <= _TIE_RTOL * rhs
    for idx in range(len(cands) - 1, -1, -1):
        R = float(cands[idx])
        if near[idx]:
            if growth_ok(space, p, R, params.alpha):
                break
        elif ok[idx]:
            break
    else:  # pragma: no cover - the nearest-neighbour fallback always passes
        raise RuntimeError(f"no good radius at point {p}")
    return GoodBall(
        center=int(p),
        radius=R,
        vol_R=ball_volume(space, p, R),
        vol_5R=ball_volume(space, p, 5 * R),
        scale_index=scale_index(R, params.R0),
    )


def find_good_balls(space: MetricMeasureSpace, params: GoodBallParams, n_jobs: int = 1):
    """One good ball per point, in point-index order regardless of ``n_jobs``."""
    space.profile  # build the shared cache before fanning out
    points = range(space.point_count)
    if n_jobs <= 1:
        return [find_good_ball(space, p, params) for p in points]
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(lambda p: find_good_ball(space, p, params), points))
