"""Greedy maximal packing of good balls, its doubled-ball cover, and the volume-counting checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import theorem13_bound
from .exceptions import CoverageError
from .goodballs import GoodBall
from .space import MetricMeasureSpace, ball


@dataclass(frozen=True)
class Packing:
    selected: tuple

    @property
    def N(self) -> int:
        return len(self.selected)

    @property
    def centers(self) -> np.ndarray:
        return np.array([g.center for g in self.selected], dtype=np.int64)

    @property
    def radii(self) -> np.ndarray:
        return np.array([g.radius for g in self.selected], dtype=np.float64)

    @property
    def k_max_scale(self) -> int:
        return max(g.scale_index for g in self.selected)


def build_packing(space: MetricMeasureSpace, good_balls) -> Packing:
    """Greedy disjoint system, largest radius first (ties by point index).

    A ball joins iff ``dist(p, q) > R_p + R_q`` for every ball already chosen.
    Maximality makes the doubled balls a cover; that is checked and a failure
    raises :class:`CoverageError`.
    """
    good_balls = list(good_balls)
    if len(good_balls) != space.point_count:
        raise ValueError(
            f"need one good ball per point ({space.point_count}), got {len(good_balls)}"
        )
    order = sorted(good_balls, key=lambda g: (-g.radius, g.center))
    chosen: list[GoodBall] = []
    centers = np.empty(len(order), dtype=np.int64)
    radii = np.empty(len(order))
    for g in order:
        n = len(chosen)
        if n == 0 or np.all(space.dist[g.center, centers[:n]] > g.radius + radii[:n]):
            centers[n] = g.center
            radii[n] = g.radius
            chosen.append(g)
    packing = Packing(tuple(chosen))
    uncovered = np.flatnonzero(~cover_membership(space, packing).any(axis=1))
    if uncovered.size:
        raise CoverageError(
            f"{uncovered.size} points not covered by doubled balls, first {int(uncovered[0])}"
        )
    return packing


def cover_membership(space: MetricMeasureSpace, packing: Packing) -> np.ndarray:
    """Boolean ``m x N`` matrix: point ``x`` lies in ``B(p_j, 2 R_j)``."""
    return space.dist[:, packing.centers] <= 2 * packing.radii[None, :]


@dataclass
class PackingReport:
    ok: bool
    order_violations: list = field(default_factory=list)
    overlap_violations: list = field(default_factory=list)
    uncovered: list = field(default_factory=list)


def check_packing(space: MetricMeasureSpace, packing: Packing) -> PackingReport:
    """Verify nonincreasing radii, pairwise R-disjointness and doubled-ball coverage."""
    radii = packing.radii
    centers = packing.centers
    order = [j for j in range(1, packing.N) if radii[j] > radii[j - 1]]
    d = space.dist[np.ix_(centers, centers)]
    close = d <= radii[:, None] + radii[None, :]
    overlaps = [(int(i), int(j)) for i, j in zip(*np.nonzero(np.triu(close, 1)))]
    uncovered = np.flatnonzero(~cover_membership(space, packing).any(axis=1)).tolist()
    return PackingReport(
        ok=not (order or overlaps or uncovered),
        order_violations=order,
        overlap_violations=overlaps,
        uncovered=uncovered,
    )


@dataclass(frozen=True)
class IntersectionTable:
    """Witnessed pairwise intersections of the doubled balls.

    ``neighbors[j]`` lists the indices ``i > j`` (so ``R_i <= R_j``) whose
    doubled ball shares a sample point with that of ``j``; every pair is
    attributed to its larger-radius member. ``center_neighbors`` is the same
    table under the metric test ``dist(p_i, p_j) <= 2 R_i + 2 R_j``.
    """

    neighbors: tuple
    center_neighbors: tuple

    @property
    def T(self) -> int:
        return sum(len(nb) for nb in self.neighbors)

    @property
    def T_center(self) -> int:
        return sum(len(nb) for nb in self.center_neighbors)


def intersection_table(space, packing, membership=None) -> IntersectionTable:
    if membership is None:
        membership = cover_membership(space, packing)
    mem = membership.astype(np.int64)
    shared = np.triu((mem.T @ mem) > 0, 1)
    c = packing.centers
    r = packing.radii
    metric = np.triu(space.dist[np.ix_(c, c)] <= 2 * (r[:, None] + r[None, :]), 1)
    return IntersectionTable(
        neighbors=tuple(tuple(int(i) for i in np.flatnonzero(row)) for row in shared),
        center_neighbors=tuple(tuple(int(i) for i in np.flatnonzero(row)) for row in metric),
    )


@dataclass
class FiveBallReport:
    ok: bool
    literal_ok: bool
    pairs_checked: int
    violations: list = field(default_factory=list)
    literal_violations: list = field(default_factory=list)
    disjoint_violations: list = field(default_factory=list)


def five_ball_check(space, packing, table: IntersectionTable) -> FiveBallReport:
    """For each intersecting pair ``j < i`` check ``B(p_i, R_i) in B(p_j, 5 R_j)``.

    The variant with target radius ``5 R_i`` is checked too and reported
    separately as ``literal_ok``; only the ``5 R_j`` form follows from the
    triangle inequality. Also confirms the ``R``-balls on each neighbour list
    are pairwise disjoint as member sets.
    """
    sel = packing.selected
    inner = [ball(space, g.center, g.radius).members for g in sel]
    violations, literal, disjoint = [], [], []
    pairs = 0
    for j, nbrs in enumerate(table.neighbors):
        big = ball(space, sel[j].center, 5 * sel[j].radius).members
        for i in nbrs:
            pairs += 1
            if not inner[i] <= big:
                violations.append((j, i))
            if not inner[i] <= ball(space, sel[j].center, 5 * sel[i].radius).members:
                literal.append((j, i))
        for a_pos, a in enumerate(nbrs):
            for b in nbrs[a_pos + 1 :]:
                if inner[a] & inner[b]:
                    disjoint.append((j, a, b))
    return FiveBallReport(
        ok=not violations and not disjoint,
        literal_ok=not literal,
        pairs_checked=pairs,
        violations=violations,
        literal_violations=literal,
        disjoint_violations=disjoint,
    )


@dataclass
class ChainReport:
    ok: bool
    links: dict
    strict_a: bool
    failures: list = field(default_factory=list)
    packed_volume: float = 0.0
    T: int = 0
    bound_T: float = 0.0
    chain_lower: float = 0.0


def counting_chain_check(space, packing, table, alpha, beta_n, R0) -> ChainReport:
    """Evaluate each link of the volume-counting estimate for ``T``.

    Links: (a) packed volume ``<= vol``; (b) growth at every selected ball;
    (c) neighbour R-ball volumes fit in ``B(p_j, 5 R_j)``; (d) the local
    volume floor ``vol(B(p_j, R_j)) / R_j**n >= beta_n``; (e) measured ``T``
    against the closed-form bound and the chain's own lower estimate.
    """
    n = space.dim
    sel = packing.selected
    vol_r = [g.vol_R for g in sel]
    failures = []

    packed = math.fsum(vol_r)
    link_a = packed <= space.volume
    if not link_a:
        failures.append(("a", None))

    for j, g in enumerate(sel):
        if not g.vol_5R <= alpha * g.vol_R:
            failures.append(("b", j))
        nb_sum = math.fsum(vol_r[i] for i in table.neighbors[j])
        if not nb_sum <= g.vol_5R:
            failures.append(("c", j))
        if not g.vol_R / g.radius**n >= beta_n:
            failures.append(("d", j))

    T = table.T
    rho_hat = space.volume / (beta_n * R0**n)
    bound_T = theorem13_bound(rho_hat, n).bound_T
    # alpha^-1 * beta_n * sum over counted pairs of R_i^n, the chain's right end
    chain_lower = beta_n / alpha * math.fsum(
        sel[i].radius ** n for nbrs in table.neighbors for i in nbrs
    )
    if not (chain_lower <= space.volume and T <= bound_T):
        failures.append(("e", None))

    links = {key: not any(f[0] == key for f in failures) for key in "abcde"}
    return ChainReport(
        ok=not failures,
        links=links,
        strict_a=packed < space.volume,
        failures=failures,
        packed_volume=packed,
        T=T,
        bound_T=bound_T,
        chain_lower=chain_lower,
    )
