"""Seeded random instances for tests, round-trip corpora and benchmark suites."""

from __future__ import annotations

import numpy as np

from .core import Graph, Permutation, relabel
from .formulations import GiInstance, QapInstance, SatInstance, TspInstance


def random_graph(n: int, density: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p) with ``p = density``."""
    if not 0 <= density <= 1:
        raise ValueError("density must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.random((n, n)) < density, 1)
    adj = (upper | upper.T).astype(np.int64)
    return Graph(adj)


def random_tsp(n: int, seed: int, integer: bool = True, symmetric: bool = True, high: int = 20) -> TspInstance:
    rng = np.random.default_rng(seed)
    cost = rng.integers(1, high + 1, size=(n, n)) if integer else rng.uniform(0.0, float(high), size=(n, n))
    if symmetric:
        cost = np.triu(cost, 1)
        cost = cost + cost.T
    np.fill_diagonal(cost, 0)
    return TspInstance(cost)


def random_qap(n: int, seed: int, high: int = 9) -> QapInstance:
    rng = np.random.default_rng(seed)
    flow = rng.integers(0, high + 1, size=(n, n))
    dist = rng.integers(0, high + 1, size=(n, n))
    np.fill_diagonal(flow, 0)
    np.fill_diagonal(dist, 0)
    return QapInstance(flow, dist)


def random_cnf(num_vars: int, num_clauses: int, width: int, seed: int) -> SatInstance:
    """Clauses over ``width`` distinct variables each, so none is tautological."""
    if not 1 <= width <= num_vars:
        raise ValueError("clause width must lie in 1..num_vars")
    rng = np.random.default_rng(seed)
    clauses = []
    for _ in range(num_clauses):
        vs = rng.choice(num_vars, size=width, replace=False) + 1
        signs = rng.choice((-1, 1), size=width)
        clauses.append(tuple(int(v * s) for v, s in zip(vs, signs)))
    return SatInstance(num_vars, tuple(clauses))


def random_gi(n: int, density: float, seed: int, isomorphic: bool = True) -> GiInstance:
    """A random graph and a shuffled copy; when ``isomorphic`` is false one vertex pair is toggled
    in the copy, which changes the edge count and so rules out any isomorphism."""
    first = random_graph(n, density, seed)
    rng = np.random.default_rng([seed, 1])
    adj = relabel(first.adj, Permutation(rng.permutation(n))).copy()
    if not isomorphic:
        if n < 2:
            raise ValueError("a non-isomorphic pair needs at least 2 vertices")
        u, v = sorted(rng.choice(n, size=2, replace=False))
        adj[u, v] = adj[v, u] = 1 - adj[u, v]
    return GiInstance(first, Graph(adj))
