"""Compiled kernels for the O(m^3) metric checks."""

import numba
import numpy as np


@numba.njit(parallel=True, cache=True)
def _row_worst_triangle(dist):
    # For each i, the worst d[i,k] - d[i,j] - d[j,k] over k > i and all j.
    m = dist.shape[0]
    worst = np.full(m, -np.inf)
    arg = np.zeros((m, 2), dtype=np.int64)
    for i in numba.prange(m):
        bi = -np.inf
        bj = 0
        bk = 0
        for j in range(m):
            dij = dist[i, j]
            for k in range(i + 1, m):
                v = dist[i, k] - dij - dist[j, k]
                if v > bi:
                    bi = v
                    bj = j
                    bk = k
        worst[i] = bi
        arg[i, 0] = bj
        arg[i, 1] = bk
    return worst, arg


def worst_triangle_defect(dist, n_threads=1):
    """Return ``(defect, (i, j, k))`` maximising ``d[i,k] - d[i,j] - d[j,k]``.

    The reduction over rows happens in index order, so the result does not
    depend on ``n_threads``.
    """
    m = dist.shape[0]
    if m < 2:
        return 0.0, None
    dist = np.ascontiguousarray(dist, dtype=np.float64)
    previous = numba.get_num_threads()
    numba.set_num_threads(max(1, min(int(n_threads), numba.config.NUMBA_NUM_THREADS)))
    try:
        worst, arg = _row_worst_triangle(dist)
    finally:
        numba.set_num_threads(previous)
    i = int(np.argmax(worst))
    return float(worst[i]), (i, int(arg[i, 0]), int(arg[i, 1]))
