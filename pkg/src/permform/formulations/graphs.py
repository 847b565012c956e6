"""Vertex-subset, partition and isomorphism problems as trace conditions on ``P A P^T``.

Violations are returned as raw traces.  Each offending edge appears twice in a
symmetric trace, so a violation is always an even integer and ``0`` means the
constraint holds.
"""

from __future__ import annotations

import numpy as np

from ..core import Graph, Permutation, TruncationSpec, relabel, trace_product


def _check(G: Graph, pi: Permutation) -> None:
    if G.n != pi.n:
        raise ValueError(f"graph has {G.n} vertices but permutation has size {pi.n}")


def mis_violation(G: Graph, pi: Permutation, k: int) -> int:
    """``Tr(P A P^T C(k))`` with the leading ``k x k`` block; zero iff ``pi(1..k)`` is independent."""
    _check(G, pi)
    return int(trace_product(relabel(G.adj, pi), TruncationSpec.prefix(k)))


def maxcut_value(G: Graph, pi: Permutation, k: int) -> int:
    """Number of edges between ``pi(1..k)`` and ``pi(k+1..n)``.

    The cross-block trace counts each cut edge once from either side, hence the halving.
    """
    _check(G, pi)
    return int(trace_product(relabel(G.adj, pi), TruncationSpec.cross(k))) // 2


def coloring_violation(G: Graph, pi: Permutation, blocks) -> int:
    """Trace against the block-diagonal ``C``; consecutive runs of positions share a color."""
    _check(G, pi)
    return int(trace_product(relabel(G.adj, pi), TruncationSpec.diagonal(blocks)))


def mvc_violation(G: Graph, pi: Permutation, k: int) -> int:
    """Trace over the trailing block; zero iff every edge touches ``pi(1..k)``.

    ``k = 0`` is accepted and passes only on an edgeless graph.
    """
    _check(G, pi)
    return int(trace_product(relabel(G.adj, pi), TruncationSpec.suffix(k)))


def mds_coverage(G: Graph, pi: Permutation, k: int) -> np.ndarray:
    """``P (A + I) P^T 1_k``.

    Entry ``i`` counts the members of ``pi(1..k)`` in the closed neighbourhood of
    ``pi(i)``.  The prefix dominates the graph iff every entry is at least 1.
    """
    _check(G, pi)
    if not 1 <= k <= G.n:
        raise ValueError(f"k must lie in 1..{G.n}, got {k}")
    closed = G.adj + np.eye(G.n, dtype=np.int64)
    return relabel(closed, pi)[:, :k].sum(axis=1)


def mds_violation(G: Graph, pi: Permutation, k: int) -> int:
    """Number of vertices left undominated by ``pi(1..k)``."""
    return int(np.count_nonzero(mds_coverage(G, pi, k) == 0))


def clique_violation(G: Graph, pi: Permutation, k: int) -> int:
    """``Tr(P (J - A - I) P^T C(k))``; zero iff ``pi(1..k)`` is a clique."""
    _check(G, pi)
    non_edges = 1 - G.adj - np.eye(G.n, dtype=np.int64)
    return int(trace_product(relabel(non_edges, pi), TruncationSpec.prefix(k)))


def gi_distance(first: Graph, second: Graph, pi: Permutation) -> int:
    """Squared Frobenius norm of ``P A1 P^T - A2``, i.e. the count of mismatched entries."""
    if first.n != second.n:
        raise ValueError("graphs differ in size")
    _check(first, pi)
    diff = relabel(first.adj, pi) - second.adj
    return int((diff * diff).sum())
