"""Finite metric-measure spaces, closed-ball queries and ground-truth generators."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ._kernels import worst_triangle_defect
from .exceptions import SpaceValidationError

#: relative tolerance for the metric axioms, scaled by the diameter
TRIANGLE_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class MetricMeasureSpace:
    """A finite sample of an ``n``-manifold: geodesic distances plus volume weights.

    ``inj`` is the injectivity radius of the underlying manifold and ``betti``
    its known Betti numbers, when a generator supplies them.
    """

    dist: np.ndarray
    weight: np.ndarray
    dim: int
    inj: float
    labels: tuple | None = None
    betti: tuple | None = None
    name: str = field(default="space")

    def __post_init__(self):
        dist = np.array(self.dist, dtype=np.float64)
        weight = np.array(self.weight, dtype=np.float64).ravel()
        if dist.ndim != 2 or dist.shape[0] != dist.shape[1] or dist.shape[0] == 0:
            raise ValueError(f"dist must be a non-empty square matrix, got shape {dist.shape}")
        if weight.shape[0] != dist.shape[0]:
            raise ValueError(
                f"weight has {weight.shape[0]} entries for {dist.shape[0]} points"
            )
        if not np.all(np.isfinite(dist)):
            raise ValueError("dist contains non-finite entries")
        if not np.all(np.isfinite(weight)) or np.any(weight <= 0):
            raise ValueError("weights must be finite and strictly positive")
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"dim must be a positive integer, got {self.dim}")
        if not (math.isfinite(self.inj) and self.inj > 0):
            raise ValueError(f"inj must be positive, got {self.inj}")
        if self.labels is not None and len(self.labels) != dist.shape[0]:
            raise ValueError("labels must have one entry per point")
        dist.setflags(write=False)
        weight.setflags(write=False)
        object.__setattr__(self, "dist", dist)
        object.__setattr__(self, "weight", weight)
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "inj", float(self.inj))
        if self.betti is not None:
            object.__setattr__(self, "betti", tuple(int(b) for b in self.betti))

    @property
    def point_count(self) -> int:
        return self.dist.shape[0]

    @cached_property
    def volume(self) -> float:
        return math.fsum(self.weight)

    @cached_property
    def diameter(self) -> float:
        return float(self.dist.max())

    @cached_property
    def nearest_neighbor(self) -> np.ndarray:
        """Distance from each point to its nearest other point (inf for m = 1)."""
        if self.point_count == 1:
            return np.array([np.inf])
        d = self.dist.copy()
        np.fill_diagonal(d, np.inf)
        return d.min(axis=1)

    @cached_property
    def profile(self):
        """Per-row sorted distances and the matching cumulative weights.

        ``vol(ball(p, r)) ~= cum[p, searchsorted(sorted[p], r, 'right') - 1]``;
        the sums are plain float cumsums, so callers re-check near-ties with
        :func:`ball_volume`.
        """
        order = np.argsort(self.dist, axis=1, kind="stable")
        srt = np.take_along_axis(self.dist, order, axis=1)
        cum = np.cumsum(self.weight[order], axis=1)
        srt.setflags(write=False)
        cum.setflags(write=False)
        return srt, cum


@dataclass(frozen=True)
class Ball:
    center: int
    radius: float
    member_indices: np.ndarray
    volume: float

    @property
    def members(self) -> frozenset:
        return frozenset(int(i) for i in self.member_indices)


@dataclass
class ValidationReport:
    ok: bool
    tolerance: float
    violations: list = field(default_factory=list)
    worst_triple: tuple | None = None
    defect: float = 0.0

    def __bool__(self):
        return self.ok


def validate(space: MetricMeasureSpace, n_jobs: int = 1) -> ValidationReport:
    """Check the metric axioms exhaustively; never raises.

    The triangle inequality is tested on every triple with tolerance
    ``1e-9 * diameter``. ``worst_triple`` is ``(i, j, k)`` with
    ``defect = d[i,k] - d[i,j] - d[j,k]``.
    """
    d = space.dist
    tol = TRIANGLE_RTOL * space.diameter
    violations = []
    if np.any(np.diag(d) != 0):
        i = int(np.flatnonzero(np.diag(d) != 0)[0])
        violations.append(f"nonzero diagonal at {i}: {d[i, i]!r}")
    if np.any(d < 0):
        i, j = np.argwhere(d < 0)[0]
        violations.append(f"negative distance at ({i}, {j}): {d[i, j]!r}")
    asym = np.abs(d - d.T)
    if asym.max() > tol:
        i, j = np.unravel_index(int(np.argmax(asym)), asym.shape)
        violations.append(f"asymmetric at ({i}, {j}): defect {asym[i, j]!r}")
    defect, triple = worst_triangle_defect(d, n_threads=n_jobs)
    if defect > tol:
        violations.append(f"triangle inequality violated at {triple}: defect {defect!r}")
    return ValidationReport(
        ok=not violations,
        tolerance=tol,
        violations=violations,
        worst_triple=triple,
        defect=max(defect, 0.0),
    )


def require_valid(space, n_jobs=1) -> ValidationReport:
    report = validate(space, n_jobs=n_jobs)
    if not report.ok:
        raise SpaceValidationError("; ".join(report.violations), report)
    return report


def _check_index(space, p):
    if not 0 <= p < space.point_count:
        raise IndexError(f"point index {p} out of range for {space.point_count} points")


def ball(space: MetricMeasureSpace, p: int, R: float) -> Ball:
    """Closed ball ``{x : dist[p, x] <= R}``."""
    _check_index(space, p)
    if R < 0:
        raise ValueError(f"radius must be nonnegative, got {R}")
    members = np.flatnonzero(space.dist[p] <= R)
    return Ball(int(p), float(R), members, math.fsum(space.weight[members]))


def ball_volume(space: MetricMeasureSpace, p: int, R: float) -> float:
    """Exact (correctly rounded) weight of the closed ball; order independent."""
    return math.fsum(space.weight[space.dist[p] <= R])


# ground-truth generators


def _cyclic_steps(m):
    k = np.arange(m)
    steps = np.abs(k[:, None] - k[None, :])
    return np.minimum(steps, m - steps).astype(np.float64)


def circle_space(m: int) -> MetricMeasureSpace:
    """``m`` equally spaced points on the unit circle with arc-length metric."""
    if m < 3:
        raise ValueError(f"circle_space needs m >= 3, got {m}")
    # integer step offsets give bit-identical distances for equal offsets
    steps = _cyclic_steps(m)
    d = steps * (2 * np.pi / m)
    return MetricMeasureSpace(
        d, np.full(m, 2 * np.pi / m), dim=1, inj=np.pi, betti=(1, 1), name=f"circle:{m}"
    )


def sphere2_space(m: int) -> MetricMeasureSpace:
    """Fibonacci-lattice sample of the unit 2-sphere with great-circle distance."""
    if m < 4:
        raise ValueError(f"sphere2_space needs m >= 4, got {m}")
    i = np.arange(m)
    z = 1 - (2 * i + 1) / m
    r = np.sqrt(1 - z * z)
    phi = i * np.pi * (3 - math.sqrt(5))
    pts = np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    d = np.arccos(np.clip(pts @ pts.T, -1.0, 1.0))
    d = (d + d.T) / 2
    np.fill_diagonal(d, 0.0)
    return MetricMeasureSpace(
        d, np.full(m, 4 * np.pi / m), dim=2, inj=np.pi, betti=(1, 0, 1), name=f"sphere2:{m}"
    )


def flat_torus_space(a: float, b: float, m1: int, m2: int) -> MetricMeasureSpace:
    """``m1 x m2`` grid on the flat torus ``R^2 / (aZ x bZ)``."""
    if not (a > 0 and b > 0):
        raise ValueError(f"torus side lengths must be positive, got a={a}, b={b}")
    if m1 < 3 or m2 < 3:
        raise ValueError(f"flat_torus_space needs m1, m2 >= 3, got {m1}, {m2}")
    i, j = np.meshgrid(np.arange(m1), np.arange(m2), indexing="ij")
    i, j = i.ravel(), j.ravel()
    di = _cyclic_steps(m1)[np.ix_(i, i)]
    dj = _cyclic_steps(m2)[np.ix_(j, j)]
    hx, hy = a / m1, b / m2
    if hx == hy:
        d = hx * np.sqrt(di**2 + dj**2)
    else:
        d = np.hypot(di * hx, dj * hy)
    m = m1 * m2
    return MetricMeasureSpace(
        d,
        np.full(m, a * b / m),
        dim=2,
        inj=min(a, b) / 2,
        betti=(1, 2, 1),
        name=f"flat-torus:{a:g},{b:g},{m1},{m2}",
    )


def disjoint_union(spaces, separation: float | None = None) -> MetricMeasureSpace:
    """Place the components at mutual distance ``separation``.

    ``separation`` must exceed twice the largest component diameter, which
    keeps the triangle inequality across components. Defaults to ten times
    the largest diameter (plus one).
    """
    spaces = list(spaces)
    if not spaces:
        raise ValueError("disjoint_union needs at least one space")
    if len(spaces) == 1:
        return spaces[0]
    dims = {s.dim for s in spaces}
    if len(dims) != 1:
        raise ValueError(f"components have mismatched dims {sorted(dims)}")
    max_diam = max(s.diameter for s in spaces)
    if separation is None:
        separation = 10 * max_diam + 1
    if not separation > 2 * max_diam:
        raise ValueError(
            f"separation {separation} must exceed 2 * max diameter = {2 * max_diam}"
        )
    sizes = [s.point_count for s in spaces]
    m = sum(sizes)
    d = np.full((m, m), float(separation))
    start = 0
    labels = []
    for c, s in enumerate(spaces):
        stop = start + s.point_count
        d[start:stop, start:stop] = s.dist
        own = s.labels if s.labels is not None else range(s.point_count)
        labels.extend(f"{c}:{lab}" for lab in own)
        start = stop
    betti = None
    if all(s.betti is not None for s in spaces):
        width = max(len(s.betti) for s in spaces)
        betti = tuple(
            sum(s.betti[k] if k < len(s.betti) else 0 for s in spaces) for k in range(width)
        )
    return MetricMeasureSpace(
        d,
        np.concatenate([s.weight for s in spaces]),
        dim=dims.pop(),
        inj=min(s.inj for s in spaces),
        labels=tuple(labels),
        betti=betti,
        name="union(" + ",".join(s.name for s in spaces) + ")",
    )
