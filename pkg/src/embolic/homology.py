"""Betti numbers over a prime field from boundary-matrix ranks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .nerve import SimplicialComplex


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, int(p**0.5) + 1))


@dataclass(frozen=True)
class FieldSpec:
    p: int = 2

    def __post_init__(self):
        if not is_prime(int(self.p)):
            raise ValueError(f"field characteristic must be prime, got {self.p}")


def _field(field) -> FieldSpec:
    if isinstance(field, FieldSpec):
        return field
    return FieldSpec(int(field))


@dataclass(frozen=True)
class BettiProfile:
    b: tuple
    field: FieldSpec
    ranks: tuple = ()

    def __iter__(self):
        return iter(self.b)

    def __len__(self):
        return len(self.b)

    def __getitem__(self, k):
        return self.b[k]


def _boundary_entries(cx: SimplicialComplex, d: int):
    # yields (column, row, i) with i the position of the deleted vertex
    faces = cx.index[d - 1]
    for col, s in enumerate(cx.simplices[d]):
        for i in range(len(s)):
            yield col, faces[s[:i] + s[i + 1 :]], i


def _check_dim(cx, d):
    if not 1 <= d <= cx.dmax:
        raise ValueError(f"boundary dimension {d} outside 1..{cx.dmax}")


def boundary_matrix(cx: SimplicialComplex, d: int, field=2) -> np.ndarray:
    """Dense ``t_{d-1} x t_d`` matrix of the boundary map with entries in ``0..p-1``.

    Deleting vertex ``i`` contributes ``(-1)**i mod p``.
    """
    _check_dim(cx, d)
    p = _field(field).p
    mat = np.zeros((len(cx.simplices[d - 1]), len(cx.simplices[d])), dtype=np.int64)
    for col, row, i in _boundary_entries(cx, d):
        mat[row, col] = (-1) ** i % p
    return mat


def boundary_columns_gf2(cx: SimplicialComplex, d: int) -> list:
    """Columns of the d-th boundary map over F_2, each packed into a Python int."""
    _check_dim(cx, d)
    cols = [0] * len(cx.simplices[d])
    for col, row, _ in _boundary_entries(cx, d):
        cols[col] |= 1 << row
    return cols


def rank_gf2(columns) -> int:
    """Rank of bit-packed vectors; reduction by leading bit with word-wide XOR."""
    pivots = {}
    for c in columns:
        while c:
            lead = c.bit_length() - 1
            other = pivots.get(lead)
            if other is None:
                pivots[lead] = c
                break
            c ^= other
    return len(pivots)


def rank_mod_p(mat, p: int) -> int:
    """Rank over F_p by Gaussian elimination on small integers."""
    a = np.array(mat, dtype=np.int64) % p
    rows, cols = a.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        nz = np.flatnonzero(a[rank:, c])
        if nz.size == 0:
            continue
        piv = rank + nz[0]
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        a[rank] = a[rank] * pow(int(a[rank, c]), -1, p) % p
        below = np.flatnonzero(a[rank + 1 :, c]) + rank + 1
        if below.size:
            a[below] = (a[below] - np.outer(a[below, c], a[rank])) % p
        rank += 1
    return rank


def boundary_rank(cx: SimplicialComplex, d: int, field=2) -> int:
    p = _field(field).p
    if p == 2:
        return rank_gf2(boundary_columns_gf2(cx, d))
    return rank_mod_p(boundary_matrix(cx, d, p), p)


def betti(cx: SimplicialComplex, field=2) -> BettiProfile:
    """``b_d = t_d - rank d_d - rank d_{d+1}`` for ``d = 0..dmax``.

    The map above ``dmax`` is taken as zero, so ``b_dmax`` is an upper bound
    when the complex was truncated.
    """
    spec = _field(field)
    ranks = [0] + [boundary_rank(cx, d, spec) for d in range(1, cx.dmax + 1)] + [0]
    t = cx.t
    b = tuple(t[d] - ranks[d] - ranks[d + 1] for d in range(cx.dmax + 1))
    return BettiProfile(b, spec, tuple(ranks[1:-1]))


@dataclass(frozen=True)
class BettiMatch:
    ok: bool
    computed: tuple
    truth: tuple


def betti_match(profile, truth) -> BettiMatch:
    """Componentwise equality; entries beyond the shorter sequence must be zero."""
    b = tuple(profile)
    truth = tuple(int(x) for x in truth)
    width = max(len(b), len(truth))
    ok = b + (0,) * (width - len(b)) == truth + (0,) * (width - len(truth))
    return BettiMatch(ok, b, truth)


def euler_characteristic(seq) -> int:
    return sum((-1) ** d * x for d, x in enumerate(seq))
