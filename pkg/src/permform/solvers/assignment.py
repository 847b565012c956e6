from __future__ import annotations

import numpy as np

from ..core import Permutation
from .sinkhorn import DoublyStochastic


def _min_cost_assignment(cost: np.ndarray) -> np.ndarray:
    """Shortest augmenting path Hungarian method, O(n^3).

    Rows are inserted one at a time; the column scan takes the first minimum,
    so ties go to the smaller column index.  Returns ``col[row]``.
    """
    n = cost.shape[0]
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    owner = np.zeros(n + 1, dtype=np.int64)  # owner[j]: row (1-based) matched to column j, 0 if free
    way = np.zeros(n + 1, dtype=np.int64)
    for i in range(1, n + 1):
        owner[0] = i
        j0 = 0
        minv = np.full(n + 1, np.inf)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = owner[j0]
            free = ~used[1:]
            cur = cost[i0 - 1] - u[i0] - v[1:]
            better = free & (cur < minv[1:])
            minv[1:][better] = cur[better]
            way[1:][better] = j0
            masked = np.where(free, minv[1:], np.inf)
            j1 = int(np.argmin(masked)) + 1
            delta = masked[j1 - 1]
            u[owner[used]] += delta
            v[used] -= delta
            minv[1:][free] -= delta
            j0 = j1
            if owner[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            owner[j0] = owner[j1]
            j0 = j1
    col = np.empty(n, dtype=np.int64)
    col[owner[1:] - 1] = np.arange(n)
    return col


def round_to_permutation(S) -> Permutation:
    """Permutation maximizing ``sum_i S[i, pi(i)]`` (exact maximum-weight perfect matching)."""
    W = S.entries if isinstance(S, DoublyStochastic) else np.asarray(S, dtype=np.float64)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise ValueError("rounding needs a square matrix")
    return Permutation(_min_cost_assignment(-W))
