"""Exact evaluation and decoding of candidates for every problem."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import Graph
from . import graphs, routing, sat
from .problems import (
    GRAPH_PROBLEMS,
    MAXIMIZE,
    CandidateSolution,
    GiInstance,
    InfeasibleCandidate,
    Problem,
    QapInstance,
    SatInstance,
    TspInstance,
)

_INSTANCE_TYPES = {
    Problem.TSP: TspInstance,
    Problem.QAP: QapInstance,
    Problem.GI: GiInstance,
    Problem.SAT: (SatInstance, sat.SatEncoding),
}


@dataclass(frozen=True)
class Evaluation:
    objective: float
    violation: int
    feasible: bool


def check_instance(problem: Problem, instance) -> None:
    problem = Problem(problem)
    expected = Graph if problem in GRAPH_PROBLEMS else _INSTANCE_TYPES[problem]
    if not isinstance(instance, expected):
        raise TypeError(f"{problem} expects {expected}, got {type(instance).__name__}")


def instance_size(problem: Problem, instance) -> int:
    """Length of the permutations the problem searches over."""
    if Problem(problem) == Problem.SAT:
        enc = as_encoding(instance)
        return enc.N
    return instance.n


def as_encoding(instance) -> sat.SatEncoding:
    if isinstance(instance, sat.SatEncoding):
        return instance
    return sat.sat_encode(instance)


def evaluate(instance, cand: CandidateSolution) -> Evaluation:
    """Objective, raw violation and feasibility of a candidate, in exact arithmetic.

    Size problems report ``k`` (or the number of colors) as the objective.  Graph
    isomorphism is unconstrained: the objective is the mismatch count and the
    candidate counts as feasible only when it is an isomorphism.
    """
    p = cand.problem
    check_instance(p, instance)
    pi, k = cand.pi, cand.k
    if p == Problem.TSP:
        return Evaluation(routing.tsp_length(instance, pi), 0, True)
    if p == Problem.QAP:
        return Evaluation(routing.qap_value(instance, pi), 0, True)
    if p == Problem.GI:
        d = graphs.gi_distance(instance.first, instance.second, pi)
        return Evaluation(d, 0, d == 0)
    if p == Problem.SAT:
        enc = as_encoding(instance)
        comp, cover = sat.sat_check(enc, pi)
        uncovered = int(np.count_nonzero(cover[2 * enc.n_vars :] < 1))
        violation = comp + uncovered
        return Evaluation(enc.m_clauses - uncovered, violation, violation == 0)
    if p == Problem.MAXCUT:
        return Evaluation(graphs.maxcut_value(instance, pi, k), 0, True)
    if p == Problem.COLORING:
        v = graphs.coloring_violation(instance, pi, cand.blocks)
        return Evaluation(len(cand.blocks), v, v == 0)
    violation_fn = {
        Problem.MIS: graphs.mis_violation,
        Problem.MVC: graphs.mvc_violation,
        Problem.MDS: graphs.mds_violation,
        Problem.CLIQUE: graphs.clique_violation,
    }[p]
    v = violation_fn(instance, pi, k)
    return Evaluation(k, v, v == 0)


def energy(problem: Problem, ev: Evaluation, penalty: float) -> float:
    """Signed objective plus weighted violation; lower is better for every problem."""
    sign = -1 if Problem(problem) in MAXIMIZE else 1
    return sign * ev.objective + penalty * ev.violation


def extract_solution(instance, cand: CandidateSolution):
    """Decode a feasible candidate into the problem's native solution.

    Vertex sets, bipartitions and color classes are frozensets of 1-based
    labels.  TSP gives the visiting order, GI the isomorphism as a dict from
    first-graph to second-graph vertices (``pi(i)`` maps to ``i``), QAP the
    facility-to-location map and SAT a :class:`SatAssignment`.
    """
    ev = evaluate(instance, cand)
    if not ev.feasible:
        raise InfeasibleCandidate(f"{cand.problem} candidate is infeasible (violation {ev.violation})")
    p, labels = cand.problem, cand.pi.map
    if p in (Problem.MIS, Problem.MVC, Problem.MDS, Problem.CLIQUE):
        return frozenset(labels[: cand.k])
    if p == Problem.MAXCUT:
        return frozenset(labels[: cand.k]), frozenset(labels[cand.k :])
    if p == Problem.COLORING:
        classes, start = [], 0
        for size in cand.blocks:
            classes.append(frozenset(labels[start : start + size]))
            start += size
        return classes
    if p == Problem.TSP:
        return list(labels)
    if p == Problem.QAP:
        return {i: v for i, v in enumerate(labels, 1)}
    if p == Problem.GI:
        return {v: i for i, v in enumerate(labels, 1)}
    return sat.sat_extract(as_encoding(instance), cand.pi)
