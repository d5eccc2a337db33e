"""Nerve of the doubled-ball cover under witness semantics."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np

from .exceptions import ComplexFormatError, MultiplicityError

DEFAULT_MULTIPLICITY_CAP = 24


@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    """Simplices as sorted tuples of strictly increasing vertex ids, grouped by dimension.

    ``simplices[d]`` holds the d-simplices in lexicographic order;
    ``simplices[0]`` is ``[(0,), (1,), ...]``.
    """

    vertex_count: int
    simplices: tuple

    @classmethod
    def from_simplices(cls, simplices, vertex_count=None, close=True, dmax=None):
        """Build from any iterable of vertex collections.

        With ``close=True`` all faces are added; otherwise the input must
        already be downward closed.
        """
        found = set()
        for s in simplices:
            t = tuple(sorted(int(v) for v in s))
            if len(set(t)) != len(t) or not t:
                raise ValueError(f"bad simplex {s!r}")
            if close:
                for k in range(1, len(t) + 1):
                    found.update(combinations(t, k))
            else:
                found.add(t)
        verts = {v for s in found for v in s}
        if vertex_count is None:
            vertex_count = max(verts) + 1 if verts else 0
        if verts and (min(verts) < 0 or max(verts) >= vertex_count):
            raise ValueError("vertex id out of range")
        found.update((v,) for v in range(vertex_count))
        top = max((len(s) - 1 for s in found), default=0)
        if dmax is None:
            dmax = top
        elif dmax < top:
            raise ValueError(f"simplex of dimension {top} exceeds dmax={dmax}")
        by_dim = [[] for _ in range(dmax + 1)]
        for s in found:
            by_dim[len(s) - 1].append(s)
        cx = cls(vertex_count, tuple(tuple(sorted(level)) for level in by_dim))
        if not close:
            missing = cx.missing_faces()
            if missing:
                raise ValueError(f"not downward closed: face {missing[0]} missing")
        return cx

    @property
    def dmax(self) -> int:
        return len(self.simplices) - 1

    @property
    def t(self) -> tuple:
        return tuple(len(level) for level in self.simplices)

    @cached_property
    def index(self):
        """Per dimension, a map from simplex to its position in lexicographic order."""
        return tuple({s: i for i, s in enumerate(level)} for level in self.simplices)

    def missing_faces(self):
        missing = []
        for d in range(1, self.dmax + 1):
            lower = self.index[d - 1]
            for s in self.simplices[d]:
                for i in range(len(s)):
                    face = s[:i] + s[i + 1 :]
                    if face not in lower:
                        missing.append(face)
        return missing

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.vertex_count == other.vertex_count and self.simplices == other.simplices

    def __hash__(self):
        return hash((self.vertex_count, self.simplices))


def witness_sets(membership: np.ndarray):
    """Distinct nonempty rows of the cover membership matrix, as sorted index tuples.

    Returns ``(sets, max_multiplicity, argmax_point)``.
    """
    sizes = membership.sum(axis=1)
    worst = int(np.argmax(sizes)) if sizes.size else 0
    rows = np.unique(np.packbits(membership, axis=1), axis=0)
    n = membership.shape[1]
    sets = []
    for row in rows:
        idx = np.flatnonzero(np.unpackbits(row)[:n])
        if idx.size:
            sets.append(tuple(int(i) for i in idx))
    return sets, int(sizes[worst]) if sizes.size else 0, worst


def nerve_from_membership(membership, dmax, multiplicity_cap=DEFAULT_MULTIPLICITY_CAP):
    """A d-simplex on ``j_0 < ... < j_d`` iff some row has all those columns set."""
    if dmax < 1:
        raise ValueError(f"dmax must be at least 1, got {dmax}")
    membership = np.asarray(membership, dtype=bool)
    n_sets = membership.shape[1]
    sizes = membership.sum(axis=1)
    over = np.flatnonzero(sizes > multiplicity_cap)
    if over.size:
        p = int(over[0])
        raise MultiplicityError(p, int(sizes[p]), multiplicity_cap)
    sets, _, _ = witness_sets(membership)
    levels = [set() for _ in range(dmax + 1)]
    levels[0].update((j,) for j in range(n_sets))
    for s in sets:
        for d in range(1, min(len(s), dmax + 1)):
            levels[d].update(combinations(s, d + 1))
    return SimplicialComplex(n_sets, tuple(tuple(sorted(level)) for level in levels))


def build_nerve(space, packing, dmax=None, multiplicity_cap=DEFAULT_MULTIPLICITY_CAP):
    """Nerve of ``{B(p_j, 2 R_j)}`` with one vertex per selected ball; ``dmax`` defaults to n + 1."""
    from .packing import cover_membership

    if dmax is None:
        dmax = space.dim + 1
    return nerve_from_membership(cover_membership(space, packing), dmax, multiplicity_cap)


@dataclass(frozen=True)
class SimplexCounts:
    t: tuple
    t0_le_2t1: bool | None
    max_ti_over_t1: int | None
    ti_le_t1: bool | None


def simplex_counts(cx: SimplicialComplex) -> SimplexCounts:
    t = cx.t
    t1 = t[1] if len(t) > 1 else 0
    higher = t[2:]
    return SimplexCounts(
        t=t,
        t0_le_2t1=None if t1 == 0 else t[0] <= 2 * t1,
        max_ti_over_t1=max(higher) if higher else None,
        ti_le_t1=None if not higher else all(x <= t1 for x in higher),
    )


# text format: header "dmax t_0 ... t_dmax", then one simplex per line


def write_complex(cx: SimplicialComplex, path):
    lines = [" ".join(str(x) for x in (cx.dmax, *cx.t))]
    for level in cx.simplices:
        lines.extend(" ".join(map(str, s)) for s in level)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_complex(path) -> SimplicialComplex:
    with open(path, encoding="utf-8") as fh:
        raw = fh.read().splitlines()
    if not raw:
        raise ComplexFormatError("empty file", 1)
    try:
        header = [int(x) for x in raw[0].split()]
    except ValueError:
        raise ComplexFormatError("header must be integers 'dmax t_0 ... t_dmax'", 1)
    if len(header) < 2 or header[0] != len(header) - 2 or min(header) < 0:
        raise ComplexFormatError("header must be 'dmax t_0 ... t_dmax'", 1)
    counts = header[1:]
    simplices = []
    for lineno, line in enumerate(raw[1:], start=2):
        if not line.strip():
            continue
        try:
            s = tuple(int(x) for x in line.split())
        except ValueError:
            raise ComplexFormatError(f"non-integer vertex id in {line!r}", lineno)
        if any(b <= a for a, b in zip(s, s[1:])):
            raise ComplexFormatError(f"vertices not strictly increasing: {line!r}", lineno)
        if len(s) - 1 > header[0] or s[0] < 0:
            raise ComplexFormatError(f"simplex out of range: {line!r}", lineno)
        simplices.append((lineno, s))
    seen = [0] * len(counts)
    for _, s in simplices:
        seen[len(s) - 1] += 1
    if seen != counts:
        raise ComplexFormatError(f"header counts {counts} do not match body counts {seen}", 1)
    present = {s for _, s in simplices}
    if len(present) != len(simplices):
        raise ComplexFormatError("duplicate simplex", 1)
    vertex_count = counts[0]
    for lineno, s in simplices:
        if s[-1] >= vertex_count:
            raise ComplexFormatError(f"vertex id {s[-1]} >= t_0 = {vertex_count}", lineno)
        if len(s) > 1:
            for i in range(len(s)):
                face = s[:i] + s[i + 1 :]
                if face not in present:
                    raise ComplexFormatError(
                        f"not downward closed: face {' '.join(map(str, face))} missing", lineno
                    )
    return SimplicialComplex.from_simplices(
        (s for _, s in simplices), vertex_count, close=False, dmax=header[0]
    )
