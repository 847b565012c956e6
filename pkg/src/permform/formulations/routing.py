"""Tour and assignment objectives.

A tour visits city ``pi(i)`` at step ``i``.  Under the package's permutation
matrix convention ``P`` is step-by-city, so the city-by-step assignment matrix
is ``P.T``; the successor heat map and the trace form of the tour length are
built from that matrix.
"""

from __future__ import annotations

import numpy as np

from ..core import Permutation, cycle_shift_matrix, perm_matrix, relabel, trace_product
from .problems import QapInstance, TspInstance


def _check(n: int, pi: Permutation) -> None:
    if n != pi.n:
        raise ValueError(f"instance has size {n} but permutation has size {pi.n}")


def tsp_length(inst: TspInstance, pi: Permutation):
    """Sum of ``d[pi(i), pi(i+1)]`` around the closed tour."""
    _check(inst.n, pi)
    order = pi.idx
    return inst.cost[order, np.roll(order, -1)].sum().item()


def tsp_trace_length(inst: TspInstance, pi: Permutation):
    """Tour length as ``Tr(X V^T X^T C)`` with ``X`` the city-by-step matrix.

    ``X^T C X`` is ``relabel(C, pi)`` so this is ``Tr(relabel(C, pi) V^T)``.
    """
    _check(inst.n, pi)
    return trace_product(relabel(inst.cost, pi), cycle_shift_matrix(pi.n).T)


def tsp_heatmap(pi: Permutation) -> np.ndarray:
    """Successor matrix ``X V X^T``: entry ``(a, b)`` is 1 iff city ``b`` directly follows ``a``."""
    X = perm_matrix(pi).T
    return X @ cycle_shift_matrix(pi.n) @ X.T


def qap_value(inst: QapInstance, pi: Permutation):
    """``Tr(F P D P^T)``."""
    _check(inst.n, pi)
    return trace_product(inst.flow, relabel(inst.dist, pi))
