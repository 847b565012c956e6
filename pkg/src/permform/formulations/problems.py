from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ..core import Graph, Permutation, _frozen


class Problem(str, enum.Enum):
    TSP = "tsp"
    QAP = "qap"
    MIS = "mis"
    MAXCUT = "maxcut"
    COLORING = "coloring"
    MVC = "mvc"
    MDS = "mds"
    CLIQUE = "clique"
    GI = "gi"
    SAT = "sat"

    def __str__(self) -> str:
        return self.value


# problems whose candidate carries an explicit cut/size parameter k
SIZED = frozenset({Problem.MIS, Problem.MAXCUT, Problem.MVC, Problem.MDS, Problem.CLIQUE})
GRAPH_PROBLEMS = SIZED | {Problem.COLORING}
MAXIMIZE = frozenset({Problem.MIS, Problem.MAXCUT, Problem.CLIQUE, Problem.SAT})


class InfeasibleCandidate(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class TspInstance:
    """City-to-city cost matrix; asymmetric costs are allowed."""

    cost: np.ndarray

    def __post_init__(self):
        cost = np.asarray(self.cost)
        if cost.ndim != 2 or cost.shape[0] != cost.shape[1]:
            raise ValueError("cost matrix must be square")
        if cost.shape[0] < 2:
            raise ValueError("a tour needs at least 2 cities")
        if not np.issubdtype(cost.dtype, np.number) or np.any(cost < 0):
            raise ValueError("costs must be nonnegative numbers")
        if np.any(np.diag(cost) != 0):
            raise ValueError("cost matrix must have a zero diagonal")
        if np.issubdtype(cost.dtype, np.integer):
            cost = cost.astype(np.int64)
        else:
            cost = cost.astype(np.float64)
        object.__setattr__(self, "cost", _frozen(cost))

    @property
    def n(self) -> int:
        return int(self.cost.shape[0])

    @property
    def symmetric(self) -> bool:
        return bool(np.array_equal(self.cost, self.cost.T))


@dataclass(frozen=True, eq=False)
class QapInstance:
    """Flow between facilities and distance between locations; facility ``i`` goes to ``pi(i)``."""

    flow: np.ndarray
    dist: np.ndarray

    def __post_init__(self):
        flow, dist = np.asarray(self.flow), np.asarray(self.dist)
        if flow.ndim != 2 or flow.shape[0] != flow.shape[1] or flow.shape != dist.shape:
            raise ValueError("flow and distance must be square matrices of equal size")
        object.__setattr__(self, "flow", _frozen(flow))
        object.__setattr__(self, "dist", _frozen(dist))

    @property
    def n(self) -> int:
        return int(self.flow.shape[0])


@dataclass(frozen=True, eq=False)
class GiInstance:
    first: Graph
    second: Graph

    def __post_init__(self):
        if self.first.n != self.second.n:
            raise ValueError("isomorphism needs graphs with equal vertex counts")

    @property
    def n(self) -> int:
        return self.first.n


@dataclass(frozen=True)
class SatInstance:
    """CNF formula over variables ``1..num_vars``; ``-v`` is the negation of ``v``."""

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.num_vars < 1:
            raise ValueError("need at least one variable")
        clauses = tuple(tuple(int(l) for l in c) for c in self.clauses)
        for ci, clause in enumerate(clauses, 1):
            if not clause:
                raise ValueError(f"clause {ci} is empty")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"clause {ci}: literal {lit} out of range 1..{self.num_vars}")
                if -lit in clause:
                    raise ValueError(f"clause {ci} is tautological (contains {abs(lit)} and {-abs(lit)})")
        object.__setattr__(self, "clauses", clauses)

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def evaluate(self, values) -> bool:
        """Direct clause evaluation under a boolean assignment (index ``v-1`` for ``x_v``)."""
        return all(any(values[abs(l) - 1] == (l > 0) for l in c) for c in self.clauses)


@dataclass(frozen=True)
class SatAssignment:
    values: tuple[bool, ...]

    def __str__(self) -> str:
        return " ".join(f"x{i}={'T' if v else 'F'}" for i, v in enumerate(self.values, 1))


@dataclass(frozen=True)
class CandidateSolution:
    problem: Problem
    pi: Permutation
    k: int | None = None
    blocks: tuple[int, ...] | None = None

    def __post_init__(self):
        problem = Problem(self.problem)
        object.__setattr__(self, "problem", problem)
        if problem in SIZED and self.k is None:
            raise ValueError(f"{problem} candidate requires k")
        if problem not in SIZED and self.k is not None:
            raise ValueError(f"{problem} candidate takes no k")
        if problem == Problem.COLORING:
            if self.blocks is None:
                raise ValueError("coloring candidate requires a block composition")
            blocks = tuple(int(b) for b in self.blocks)
            if any(b < 1 for b in blocks) or sum(blocks) != self.pi.n:
                raise ValueError(f"blocks {blocks} are not a composition of {self.pi.n}")
            object.__setattr__(self, "blocks", blocks)
        elif self.blocks is not None:
            raise ValueError(f"{problem} candidate takes no blocks")
