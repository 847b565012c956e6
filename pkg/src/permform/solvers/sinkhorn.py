from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class DoublyStochastic:
    entries: np.ndarray
    residual: float
    iterations: int = 0

    @property
    def n(self) -> int:
        return int(self.entries.shape[0])


def residual(S: np.ndarray) -> float:
    """Largest deviation of any row or column sum from 1."""
    return float(max(np.abs(S.sum(axis=1) - 1).max(), np.abs(S.sum(axis=0) - 1).max()))


def sinkhorn_normalize(M, iters: int = 50, tol: float = 1e-6) -> DoublyStochastic:
    """Alternate row and column rescaling of a strictly positive square matrix.

    Stops once every row and column sum is within ``tol`` of 1 or after ``iters``
    sweeps; the achieved residual is reported either way.
    """
    S = np.array(M, dtype=np.float64)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError("Sinkhorn normalization needs a square matrix")
    if not np.all(S > 0) or not np.all(np.isfinite(S)):
        raise ValueError("Sinkhorn normalization needs strictly positive finite entries")
    res = residual(S)
    done = 0
    while res > tol and done < iters:
        S /= S.sum(axis=1, keepdims=True)
        S /= S.sum(axis=0, keepdims=True)
        done += 1
        res = residual(S)
    return DoublyStochastic(S, res, done)
