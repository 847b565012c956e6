"""Brute-force reference solvers and an exhaustive search over the permutation formulations.

The two families share no evaluation code: the brute-force side works on
vertex bitmasks, colorings and tours directly, while :func:`formulation_search`
evaluates the dense trace ``Tr(P A P^T C)`` for every permutation.  Agreement of
their optima on small instances is the evidence that a formulation is exact.

Ties always resolve to the lexicographically smallest witness.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .core import Graph, Permutation, compositions, cycle_shift_matrix, truncation_matrix, TruncationSpec
from .formulations import (
    CandidateSolution,
    GiInstance,
    Problem,
    QapInstance,
    SatAssignment,
    SatInstance,
    TspInstance,
    as_encoding,
    check_instance,
    extract_solution,
)

LIMIT_ENV = "PERMFORM_ORACLE_LIMIT"
DEFAULT_SUBSET_LIMIT = 20
PERMUTATION_LIMIT = 10
FORMULATION_LIMIT = 8


class OracleLimitError(ValueError):
    """Instance exceeds an oracle's configured size limit."""


def subset_limit() -> int:
    """Vertex/variable limit for 2^n enumeration; overridable through ``PERMFORM_ORACLE_LIMIT``."""
    raw = os.environ.get(LIMIT_ENV)
    return int(raw) if raw else DEFAULT_SUBSET_LIMIT


def _require(size: int, limit: int, what: str) -> None:
    if size > limit:
        raise OracleLimitError(f"{what} of size {size} exceeds the oracle limit {limit}")


@dataclass
class OracleResult:
    problem: Problem
    optimum: Any
    witness: Any
    candidate: CandidateSolution | None = None
    models: list[SatAssignment] | None = field(default=None, repr=False)


def _masks(n: int) -> np.ndarray:
    return np.arange(1 << n, dtype=np.int64)


def _popcount(masks: np.ndarray, n: int) -> np.ndarray:
    counts = np.zeros_like(masks)
    for v in range(n):
        counts += (masks >> v) & 1
    return counts


def _smallest_set(masks: np.ndarray, n: int) -> frozenset:
    # lexicographic order on the sorted member tuples
    best = min(tuple(v + 1 for v in range(n) if (int(m) >> v) & 1) for m in masks)
    return frozenset(best)


def _bits(adj_row) -> int:
    return sum(1 << int(u) for u in np.flatnonzero(adj_row))


def brute_subset(problem: Problem, G: Graph, limit: int | None = None) -> OracleResult:
    """Optimum of MIS, MVC, MDS or Clique by checking all ``2^n`` vertex subsets."""
    problem = Problem(problem)
    n = G.n
    _require(n, subset_limit() if limit is None else limit, "graph")
    masks = _masks(n)
    ok = np.ones(masks.size, dtype=bool)
    if problem == Problem.MIS:
        for v in range(n):
            ok &= ~(((masks >> v) & 1).astype(bool) & ((masks & _bits(G.adj[v])) != 0))
    elif problem == Problem.CLIQUE:
        comp = G.complement().adj
        for v in range(n):
            ok &= ~(((masks >> v) & 1).astype(bool) & ((masks & _bits(comp[v])) != 0))
    elif problem == Problem.MVC:
        for u, v in G.edges():
            ok &= ((masks >> (u - 1)) & 1).astype(bool) | ((masks >> (v - 1)) & 1).astype(bool)
    elif problem == Problem.MDS:
        for v in range(n):
            ok &= (masks & (_bits(G.adj[v]) | (1 << v))) != 0
    else:
        raise ValueError(f"brute_subset does not handle {problem}")
    sizes = _popcount(masks, n)
    pick = max if problem in (Problem.MIS, Problem.CLIQUE) else min
    optimum = int(pick(sizes[ok]))
    return OracleResult(problem, optimum, _smallest_set(masks[ok & (sizes == optimum)], n))


def brute_maxcut(G: Graph, limit: int | None = None) -> OracleResult:
    """Largest cut over all bipartitions with both sides non-empty."""
    n = G.n
    if n < 2:
        raise ValueError("max-cut needs at least 2 vertices")
    _require(n, subset_limit() if limit is None else limit, "graph")
    masks = _masks(n)
    cut = np.zeros_like(masks)
    for u, v in G.edges():
        cut += ((masks >> (u - 1)) ^ (masks >> (v - 1))) & 1
    sizes = _popcount(masks, n)
    proper = (sizes > 0) & (sizes < n)
    optimum = int(cut[proper].max())
    side = _smallest_set(masks[proper & (cut == optimum)], n)
    return OracleResult(Problem.MAXCUT, optimum, (side, frozenset(range(1, n + 1)) - side))


def _color(adj: np.ndarray, k: int) -> list[int] | None:
    """First proper coloring with colors ``0..k-1`` in lexicographic order, or None."""
    n = adj.shape[0]
    colors = [-1] * n

    def place(v: int, used: int) -> bool:
        if v == n:
            return True
        # a vertex may open at most one new color, which removes color-renaming symmetry
        for c in range(min(used + 1, k)):
            if all(colors[u] != c for u in range(v) if adj[v, u]):
                colors[v] = c
                if place(v + 1, max(used, c + 1)):
                    return True
        colors[v] = -1
        return False

    return colors if place(0, 0) else None


def brute_chromatic(G: Graph, limit: int | None = None) -> OracleResult:
    n = G.n
    _require(n, subset_limit() if limit is None else limit, "graph")
    for k in range(1, n + 1):
        colors = _color(G.adj, k)
        if colors is not None:
            classes = [frozenset(v + 1 for v in range(n) if colors[v] == c) for c in range(k)]
            return OracleResult(Problem.COLORING, k, classes)
    raise AssertionError("unreachable: n colors always suffice")


def brute_tsp(inst: TspInstance, limit: int = PERMUTATION_LIMIT) -> OracleResult:
    """Shortest tour over all ``(n-1)!`` orders starting at city 1."""
    n = inst.n
    _require(n, limit, "TSP instance")
    cost = inst.cost.tolist()
    best, best_tour = None, None
    for rest in itertools.permutations(range(1, n)):
        tour = (0,) + rest
        length = sum(cost[tour[i]][tour[(i + 1) % n]] for i in range(n))
        if best is None or length < best:
            best, best_tour = length, tour
    return OracleResult(Problem.TSP, best, [c + 1 for c in best_tour])


def brute_qap(inst: QapInstance, limit: int = PERMUTATION_LIMIT) -> OracleResult:
    """Minimum of ``sum_ij F[i, j] D[p(j), p(i)]`` (``Tr(F P D P^T)``) over all ``n!`` assignments."""
    n = inst.n
    _require(n, limit, "QAP instance")
    F, D = inst.flow.tolist(), inst.dist.tolist()
    best, best_p = None, None
    for p in itertools.permutations(range(n)):
        value = sum(F[i][j] * D[p[j]][p[i]] for i in range(n) for j in range(n))
        if best is None or value < best:
            best, best_p = value, p
    return OracleResult(Problem.QAP, best, [v + 1 for v in best_p])


def brute_isomorphism(inst: GiInstance, limit: int = PERMUTATION_LIMIT) -> OracleResult:
    """Fewest mismatched adjacency entries over all vertex bijections (0 iff isomorphic)."""
    n = inst.n
    _require(n, limit, "graph pair")
    e1 = inst.first.edges()
    e2 = {frozenset(e) for e in inst.second.edges()}
    best, best_f = None, None
    for image in itertools.permutations(range(1, n + 1)):
        mapped = {frozenset((image[u - 1], image[v - 1])) for u, v in e1}
        d = 2 * len(mapped ^ e2)
        if best is None or d < best:
            best, best_f = d, {u: image[u - 1] for u in range(1, n + 1)}
            if d == 0:
                break
    return OracleResult(Problem.GI, best, best_f)


def brute_sat(inst: SatInstance, limit: int | None = None) -> OracleResult:
    """Enumerate all ``2^n`` assignments; ``optimum`` is 1 if satisfiable else 0.

    ``models`` lists every satisfying assignment in lexicographic order
    (False before True, ``x1`` most significant).
    """
    n = inst.num_vars
    _require(n, subset_limit() if limit is None else limit, "formula")
    masks = _masks(n)
    sat = np.ones(masks.size, dtype=bool)
    for clause in inst.clauses:
        hit = np.zeros(masks.size, dtype=bool)
        for lit in clause:
            bit = ((masks >> (n - abs(lit))) & 1).astype(bool)
            hit |= bit if lit > 0 else ~bit
        sat &= hit
    models = [
        SatAssignment(tuple(bool((int(m) >> (n - v)) & 1) for v in range(1, n + 1)))
        for m in masks[sat]
    ]
    return OracleResult(Problem.SAT, int(bool(models)), models[0] if models else None, models=models)


def brute_oracle(problem: Problem, instance, limit: int | None = None) -> OracleResult:
    problem = Problem(problem)
    check_instance(problem, instance)
    if problem in (Problem.MIS, Problem.MVC, Problem.MDS, Problem.CLIQUE):
        return brute_subset(problem, instance, limit)
    if problem == Problem.MAXCUT:
        return brute_maxcut(instance, limit)
    if problem == Problem.COLORING:
        return brute_chromatic(instance, limit)
    if problem == Problem.SAT:
        return brute_sat(instance, limit)
    permutation_limit = PERMUTATION_LIMIT if limit is None else limit
    if problem == Problem.TSP:
        return brute_tsp(instance, permutation_limit)
    if problem == Problem.QAP:
        return brute_qap(instance, permutation_limit)
    return brute_isomorphism(instance, permutation_limit)


# -- exhaustive search over the formulations ---------------------------------


def _all_perms(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)


def _batch_relabel(A: np.ndarray, perms: np.ndarray) -> np.ndarray:
    return A[perms[:, :, None], perms[:, None, :]]


def _batch_trace(R: np.ndarray, C: np.ndarray) -> np.ndarray:
    """``Tr(R_p @ C)`` for each stacked matrix."""
    return np.einsum("pij,ji->p", R, C)


def formulation_search(problem: Problem, instance, limit: int = FORMULATION_LIMIT) -> OracleResult:
    """Optimise the permutation formulation over every ``pi`` (and every valid ``k`` or block
    composition) by dense enumeration.

    Permutations are visited in lexicographic order so the witness candidate is
    the first optimal one.
    """
    problem = Problem(problem)
    check_instance(problem, instance)
    if problem == Problem.SAT:
        return _sat_search(instance, limit)
    n = instance.n
    _require(n, limit, "instance")
    perms = _all_perms(n)

    def result(optimum, index, k=None, blocks=None):
        cand = CandidateSolution(problem, Permutation(perms[index]), k=k, blocks=blocks)
        witness = extract_solution(instance, cand) if problem != Problem.GI or optimum == 0 else None
        return OracleResult(problem, optimum, witness, cand)

    if problem in (Problem.TSP, Problem.QAP, Problem.GI):
        if problem == Problem.TSP:
            values = _batch_trace(_batch_relabel(instance.cost, perms), cycle_shift_matrix(n).T)
        elif problem == Problem.QAP:
            values = _batch_trace(_batch_relabel(instance.dist, perms), instance.flow)
        else:
            diff = _batch_relabel(instance.first.adj, perms) - instance.second.adj
            values = (diff * diff).sum(axis=(1, 2))
        index = int(np.argmin(values))
        return result(values[index].item(), index)

    A = instance.adj
    eye = np.eye(n, dtype=np.int64)
    if problem == Problem.MDS:
        R = _batch_relabel(A + eye, perms)
        for k in range(1, n + 1):
            ones_k = (np.arange(n) < k).astype(np.int64)
            coverage = np.einsum("pij,j->pi", R, ones_k)
            hits = np.flatnonzero((coverage >= 1).all(axis=1))
            if hits.size:
                return result(k, int(hits[0]), k=k)
        raise AssertionError("unreachable: k = n always dominates")

    if problem == Problem.COLORING:
        R = _batch_relabel(A, perms)
        for k in range(1, n + 1):
            for blocks in compositions(n, k):
                viol = _batch_trace(R, truncation_matrix(TruncationSpec.diagonal(blocks), n))
                hits = np.flatnonzero(viol == 0)
                if hits.size:
                    return result(k, int(hits[0]), blocks=blocks)
        raise AssertionError("unreachable: singleton blocks always color")

    if problem == Problem.MAXCUT:
        if n < 2:
            raise ValueError("max-cut needs at least 2 vertices")
        R = _batch_relabel(A, perms)
        best = None
        for k in range(1, n):
            cut = _batch_trace(R, truncation_matrix(TruncationSpec.cross(k), n)) // 2
            index = int(np.argmax(cut))
            if best is None or cut[index] > best[0]:
                best = (int(cut[index]), index, k)
        return result(best[0], best[1], k=best[2])

    if problem == Problem.MVC:
        R = _batch_relabel(A, perms)
        for k in range(0, n + 1):
            hits = np.flatnonzero(_batch_trace(R, truncation_matrix(TruncationSpec.suffix(k), n)) == 0)
            if hits.size:
                return result(k, int(hits[0]), k=k)
        raise AssertionError("unreachable: k = n always covers")

    if problem in (Problem.MIS, Problem.CLIQUE):
        base = A if problem == Problem.MIS else 1 - A - eye
        R = _batch_relabel(base, perms)
        for k in range(n, 0, -1):
            hits = np.flatnonzero(_batch_trace(R, truncation_matrix(TruncationSpec.prefix(k), n)) == 0)
            if hits.size:
                return result(k, int(hits[0]), k=k)
        raise AssertionError("unreachable: k = 1 is always feasible")

    raise ValueError(f"formulation_search does not handle {problem}")


def _sat_search(instance, limit: int) -> OracleResult:
    enc = as_encoding(instance)
    n2 = 2 * enc.n_vars
    _require(n2, limit, "literal block")
    heads = _all_perms(n2)
    tail = np.broadcast_to(np.arange(n2, enc.N), (heads.shape[0], enc.m_clauses))
    perms = np.concatenate([heads, tail], axis=1)
    R = _batch_relabel(enc.A.astype(np.int16), perms)
    CMC = np.einsum("ij,pjk,kl->p", enc.C, R, enc.C)
    cover = np.einsum("ij,pjk,kl,l->pi", enc.T, R, enc.C, np.ones(enc.N, dtype=np.int64))
    ok = (CMC == 0) & (cover[:, n2:] >= 1).all(axis=1)
    hits = np.flatnonzero(ok)
    if not hits.size:
        return OracleResult(Problem.SAT, 0, None)
    cand = CandidateSolution(Problem.SAT, Permutation(perms[int(hits[0])]))
    return OracleResult(Problem.SAT, 1, extract_solution(enc, cand), cand)
