"""Simulated annealing over permutations, with an outer loop over ``k`` for the size problems.

Maximum-size problems (MIS, clique) start at ``k = 1`` and grow ``k`` each time
the current stage reaches a zero violation.  Minimum-size problems (vertex
cover, dominating set, coloring) start from a trivially feasible ``k`` and
shrink it.  Every stage is warm-started from the previous stage's best state.
A failed stage does not prove infeasibility, so ``k`` is never bisected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..core import Permutation
from ..formulations import (
    MAXIMIZE,
    CandidateSolution,
    Problem,
    as_encoding,
    check_instance,
    energy,
    evaluate,
)
from .params import AnnealParams, SolveResult

# weight of one unit of violation in the energy; larger than any objective swing within a stage
PENALTY = 1000.0

GROW = frozenset({Problem.MIS, Problem.CLIQUE})
SHRINK = frozenset({Problem.MVC, Problem.MDS})


@dataclass
class State:
    perm: np.ndarray  # position -> 0-based item
    k: int | None = None
    blocks: list[int] | None = None

    def copy(self) -> "State":
        return State(self.perm.copy(), self.k, None if self.blocks is None else list(self.blocks))

    def candidate(self, problem: Problem) -> CandidateSolution:
        return CandidateSolution(
            problem,
            Permutation(self.perm),
            k=self.k,
            blocks=None if self.blocks is None else tuple(self.blocks),
        )


class Annealer:
    """Energy evaluation and neighbourhood moves for one (problem, instance) pair."""

    def __init__(self, problem, instance):
        self.problem = Problem(problem)
        check_instance(self.problem, instance)
        self.instance = instance
        p = self.problem
        self.sign = -1 if p in MAXIMIZE else 1
        if p == Problem.SAT:
            enc = as_encoding(instance)
            self.enc = enc
            self.n = enc.N
            self.n_vars = enc.n_vars
        elif p == Problem.GI:
            self.n = instance.n
            self.a1, self.a2 = instance.first.adj, instance.second.adj
        elif p == Problem.TSP:
            self.n = instance.n
            self.cost = instance.cost
        elif p == Problem.QAP:
            self.n = instance.n
            self.flow, self.dist = instance.flow, instance.dist
        else:
            self.n = instance.n
            adj = instance.adj
            self.adj = adj
            if p == Problem.CLIQUE:
                self.adj = 1 - adj - np.eye(self.n, dtype=np.int64)
            elif p == Problem.MDS:
                self.adj = adj + np.eye(self.n, dtype=np.int64)

    # -- energy ---------------------------------------------------------------

    def score(self, st: State) -> tuple[float, int]:
        """(objective, violation) of a state, matching :func:`formulations.evaluate`."""
        p, perm, k = self.problem, st.perm, st.k
        if p in (Problem.MIS, Problem.CLIQUE):
            s = perm[:k]
            return k, int(self.adj[np.ix_(s, s)].sum())
        if p == Problem.MVC:
            s = perm[k:]
            return k, int(self.adj[np.ix_(s, s)].sum())
        if p == Problem.MDS:
            return k, int(np.count_nonzero(self.adj[:, perm[:k]].sum(axis=1) == 0))
        if p == Problem.COLORING:
            color = np.empty(self.n, dtype=np.int64)
            color[perm] = np.repeat(np.arange(len(st.blocks)), st.blocks)
            return len(st.blocks), int((self.adj * (color[:, None] == color[None, :])).sum())
        if p == Problem.MAXCUT:
            return int(self.adj[np.ix_(perm[:k], perm[k:])].sum()), 0
        if p == Problem.TSP:
            return self.cost[perm, np.roll(perm, -1)].sum().item(), 0
        if p == Problem.QAP:
            return np.einsum("ij,ji->", self.flow, self.dist[np.ix_(perm, perm)]).item(), 0
        if p == Problem.GI:
            diff = self.a1[np.ix_(perm, perm)] - self.a2
            return int((diff * diff).sum()), 0
        sel = perm[: self.n_vars]
        comp = int(self.enc.conflict[np.ix_(sel, sel)].sum())
        uncovered = int(np.count_nonzero(self.enc.incidence[:, sel].sum(axis=1) == 0))
        return self.enc.m_clauses - uncovered, comp + uncovered

    def energy(self, st: State) -> tuple[float, float, int]:
        obj, viol = self.score(st)
        return self.sign * obj + PENALTY * viol, obj, viol

    def done(self, obj, viol) -> bool:
        """Whether a stage can stop early: constraints met, or an isomorphism found."""
        if self.problem == Problem.GI:
            return obj == 0
        if self.problem in (Problem.TSP, Problem.QAP, Problem.MAXCUT):
            return False
        return viol == 0

    # -- moves ----------------------------------------------------------------

    def propose(self, st: State, rng: np.random.Generator) -> State | None:
        p, n = self.problem, self.n
        new = st.copy()
        perm, k = new.perm, new.k
        if p in GROW or p in SHRINK:
            if k <= 0 or k >= n:
                return None
            i, j = rng.integers(k), rng.integers(k, n)
        elif p == Problem.MAXCUT:
            if n < 2:
                return None
            if n > 2 and rng.random() < 0.2:
                new.k = k + 1 if (k == 1 or (k < n - 1 and rng.random() < 0.5)) else k - 1
                return new
            i, j = rng.integers(k), rng.integers(k, n)
        elif p == Problem.COLORING:
            blocks = new.blocks
            if len(blocks) < 2:
                return None
            if rng.random() < 0.2:
                b = int(rng.integers(len(blocks) - 1))
                src, dst = (b, b + 1) if rng.random() < 0.5 else (b + 1, b)
                if blocks[src] > 1:
                    blocks[src] -= 1
                    blocks[dst] += 1
                    return new
            a, b = rng.choice(len(blocks), size=2, replace=False)
            starts = np.concatenate([[0], np.cumsum(blocks)])
            i = starts[a] + rng.integers(blocks[a])
            j = starts[b] + rng.integers(blocks[b])
        elif p == Problem.SAT:
            nv = self.n_vars
            i, j = rng.integers(nv), rng.integers(nv, 2 * nv)
        else:
            if n < 2:
                return None
            i, j = rng.choice(n, size=2, replace=False)
            if p == Problem.TSP and rng.random() < 0.5:
                lo, hi = min(i, j), max(i, j)
                perm[lo : hi + 1] = perm[lo : hi + 1][::-1].copy()
                return new
        perm[i], perm[j] = perm[j], perm[i]
        return new

    def _calibrate(self, st: State, rng: np.random.Generator, samples: int = 32) -> float:
        e0 = self.energy(st)[0]
        deltas = []
        for _ in range(samples):
            cand = self.propose(st, rng)
            if cand is None:
                break
            d = abs(self.energy(cand)[0] - e0)
            if d > 0:
                deltas.append(d)
        return float(np.mean(deltas)) if deltas else 1.0

    # -- search ---------------------------------------------------------------

    def stage(self, st: State, rng: np.random.Generator, params: AnnealParams) -> tuple[State, dict]:
        """One annealing run at fixed ``k``/block count; returns the best state seen."""
        e, obj, viol = self.energy(st)
        best, best_e, best_obj, best_viol = st.copy(), e, obj, viol
        history = [(0, best_e)]
        used = 0
        if not self.done(obj, viol):
            temp = params.initial_temperature * self._calibrate(st, rng)
            for it in range(1, params.iterations + 1):
                used = it
                cand = self.propose(st, rng)
                if cand is None:
                    break
                ce, cobj, cviol = self.energy(cand)
                d = ce - e
                if d <= 0 or rng.random() < math.exp(-d / temp):
                    st, e, obj, viol = cand, ce, cobj, cviol
                    if e < best_e:
                        best, best_e, best_obj, best_viol = st.copy(), e, obj, viol
                        history.append((it, best_e))
                        if self.done(obj, viol):
                            break
                temp = max(temp * params.cooling_rate, 1e-300)
        info = {
            "k": best.k if self.problem != Problem.COLORING else len(best.blocks),
            "iterations": used,
            "best_energy": best_e,
            "violation": best_viol,
            "history": history,
        }
        return best, info

    def initial_state(self, rng: np.random.Generator) -> State:
        p, n = self.problem, self.n
        if p == Problem.SAT:
            nv = self.n_vars
            head = rng.permutation(2 * nv)
            return State(np.concatenate([head, np.arange(2 * nv, n)]))
        perm = rng.permutation(n)
        if p in GROW:
            return State(perm, k=1)
        if p in SHRINK:
            return State(perm, k=n)
        if p == Problem.MAXCUT:
            return State(perm, k=max(1, n // 2))
        if p == Problem.COLORING:
            return State(perm, blocks=[1] * n)
        return State(perm)

    def run(self, rng: np.random.Generator, params: AnnealParams, st: State | None = None) -> tuple[State, list]:
        """Full search including the k-schedule; returns the best state and per-stage summaries."""
        p = self.problem
        st = self.initial_state(rng) if st is None else st.copy()
        stages = []
        if p in GROW or p in SHRINK or p == Problem.COLORING:
            feasible = None
            while True:
                st, info = self.stage(st, rng, params)
                stages.append(info)
                if info["violation"] != 0:
                    break
                feasible = st.copy()
                nxt = self._next_size(st)
                if nxt is None:
                    break
                st = nxt
            return (feasible if feasible is not None else st), stages
        st, info = self.stage(st, rng, params)
        stages.append(info)
        return st, stages

    def _next_size(self, st: State) -> State | None:
        p, n = self.problem, self.n
        nxt = st.copy()
        if p in GROW:
            if st.k >= n:
                return None
            nxt.k += 1
        elif p == Problem.MVC:
            if st.k <= 0:
                return None
            nxt.k -= 1
        elif p == Problem.MDS:
            if st.k <= 1:
                return None
            nxt.k -= 1
        else:
            if len(st.blocks) <= 1:
                return None
            last = nxt.blocks.pop()
            nxt.blocks[-1] += last
        return nxt


def restart_rng(seed: int, restart: int) -> np.random.Generator:
    return np.random.default_rng([seed, restart])


def pick_best(problem: Problem, results: list[SolveResult]) -> SolveResult:
    """Feasible before infeasible, then lowest energy, then earliest index."""
    return min(results, key=lambda r: (not r.feasible, energy(problem, r.evaluation, PENALTY)))


def anneal(problem, instance, params: AnnealParams | None = None) -> SolveResult:
    """Best candidate over ``params.restarts`` independent, seeded annealing runs.

    The returned evaluation is recomputed exactly through the formulations module,
    so a candidate flagged feasible always satisfies its constraints.
    """
    params = params or AnnealParams()
    annealer = Annealer(problem, instance)
    runs = []
    for r in range(params.restarts):
        st, stages = annealer.run(restart_rng(params.seed, r), params)
        cand = st.candidate(annealer.problem)
        summary = {
            "restart": r,
            "stages": [{key: s[key] for key in ("k", "iterations", "best_energy", "violation")} for s in stages],
        }
        runs.append(SolveResult(cand, evaluate(instance, cand), "anneal", summary))
    best = pick_best(annealer.problem, runs)
    best.summary = {
        "best_restart": best.summary["restart"],
        "restart_energies": [energy(annealer.problem, r.evaluation, PENALTY) for r in runs],
        "stages": best.summary["stages"],
    }
    return best
