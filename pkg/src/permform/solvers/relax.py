"""Doubly-stochastic relaxation of the trace formulations.

Each supported objective is ``Tr(S X S^T Y)`` for fixed ``X, Y`` (graph
isomorphism is a squared Frobenius norm instead), with the permutation matrix
replaced by a doubly-stochastic ``S``.  Optimization is entropic mirror descent:
the iterate is ``S = sinkhorn(exp(logits / tau))`` and the gradient with respect
to ``S`` is subtracted from the logits.
"""

from __future__ import annotations

import numpy as np

from ..core import TruncationSpec, cycle_shift_matrix, truncation_matrix
from ..formulations import CandidateSolution, Problem, check_instance, energy, evaluate
from .anneal import Annealer, AnnealParams, State, restart_rng
from .assignment import round_to_permutation
from .params import RelaxParams, SolveResult
from .sinkhorn import DoublyStochastic, sinkhorn_normalize

RELAXABLE = frozenset(
    {Problem.TSP, Problem.QAP, Problem.GI, Problem.MIS, Problem.CLIQUE, Problem.MVC, Problem.MAXCUT}
)


class UnsupportedProblem(ValueError):
    pass


def _trace_form(S, X, Y):
    """Value and gradient of ``Tr(S X S^T Y)`` with respect to ``S``."""
    SX = S @ X
    value = np.einsum("ij,ji->", SX @ S.T, Y)
    grad = Y.T @ S @ X.T + Y @ SX
    return value, grad


def _pieces(problem: Problem, instance, k):
    """(constant term, X, Y, weight-is-penalty) so that value = const + w * Tr(S X S^T Y)."""
    n = instance.n
    if problem == Problem.TSP:
        return 0.0, instance.cost.astype(float), cycle_shift_matrix(n).T.astype(float), False
    if problem == Problem.QAP:
        return 0.0, instance.dist.astype(float), instance.flow.astype(float), False
    A = instance.adj.astype(float)
    if k is None:
        raise ValueError(f"{problem} relaxation requires k")
    if problem == Problem.MAXCUT:
        return 0.0, A, truncation_matrix(TruncationSpec.cross(k), n).astype(float), False
    if problem == Problem.MIS:
        return -float(k), A, truncation_matrix(TruncationSpec.prefix(k), n).astype(float), True
    if problem == Problem.CLIQUE:
        non_edges = 1.0 - A - np.eye(n)
        return -float(k), non_edges, truncation_matrix(TruncationSpec.prefix(k), n).astype(float), True
    return float(k), A, truncation_matrix(TruncationSpec.suffix(k), n).astype(float), True


def relaxed_objective(problem, instance, S, penalty: float, k: int | None = None):
    """Penalized objective at a (relaxed) permutation matrix and its exact gradient.

    Lower is better: maximization objectives enter negated, so at a
    permutation matrix the value equals
    ``formulations.energy(problem, evaluate(...), penalty)``.
    """
    problem = Problem(problem)
    if problem not in RELAXABLE:
        raise UnsupportedProblem(f"no relaxation for {problem}")
    check_instance(problem, instance)
    S = np.asarray(S.entries if isinstance(S, DoublyStochastic) else S, dtype=np.float64)
    if S.shape != (instance.n, instance.n):
        raise ValueError(f"S has shape {S.shape}, instance has size {instance.n}")
    if problem == Problem.GI:
        A1 = instance.first.adj.astype(float)
        R = S @ A1 @ S.T - instance.second.adj
        return float((R * R).sum()), 2.0 * (R @ S @ A1.T + R.T @ S @ A1)
    const, X, Y, penalized = _pieces(problem, instance, k)
    value, grad = _trace_form(S, X, Y)
    if problem == Problem.MAXCUT:
        return -0.5 * float(value), -0.5 * grad
    if penalized:
        return const + penalty * float(value), penalty * grad
    return float(value), grad


def _positive(logits: np.ndarray, tau: float) -> np.ndarray:
    z = (logits - logits.max()) / tau
    # floor keeps every entry strictly positive for the normalization
    return np.exp(np.clip(z, -50.0, 0.0))


def _relax_stage(problem, instance, k, params: RelaxParams, rng, annealer: Annealer, warm: np.ndarray | None):
    n = instance.n
    logits = rng.normal(scale=0.01, size=(n, n))
    if warm is not None:
        logits[np.arange(n), warm] += 1.0
    tau, lam = params.temperature, params.penalty
    best, best_key = None, None
    S = None
    value = None
    for step in range(1, params.steps + 1):
        S = sinkhorn_normalize(_positive(logits, tau), params.sinkhorn_iters, params.tolerance)
        value, grad = relaxed_objective(problem, instance, S, lam, k)
        scale = np.abs(grad).max()
        if scale > 0:
            logits = logits - params.learning_rate * grad / scale
        tau *= params.temperature_decay
        if step % params.round_every == 0 or step == params.steps:
            st = State(round_to_permutation(S).idx.copy(), k=k)
            obj, viol = annealer.score(st)
            key = (viol != 0, annealer.sign * obj)
            if best_key is None or key < best_key:
                best, best_key = st, key
            if viol:
                lam *= params.penalty_growth
            elif annealer.done(obj, viol):
                break
    summary = {
        "k": k,
        "steps": step,
        "relaxed_value": float(value),
        "sinkhorn_residual": S.residual,
        "penalty": lam,
        "temperature": tau,
    }
    return best, summary


def _polish(annealer: Annealer, st: State, rng, params: RelaxParams) -> State:
    if params.polish_iterations <= 0:
        return st
    polish = AnnealParams(seed=0, iterations=params.polish_iterations)
    best, _ = annealer.stage(st, rng, polish)
    return best


def relax_solve(problem, instance, params: RelaxParams | None = None) -> SolveResult:
    """Relax, round to the nearest permutation, polish by a short annealing stage.

    Size problems run one relaxation stage per ``k`` (growing for MIS/clique,
    shrinking for vertex cover, warm-started from the previous rounding) and
    stop at the first ``k`` the pipeline cannot make feasible.  Max-cut relaxes
    at ``k = n // 2`` and lets the polish move the cut point.
    """
    params = params or RelaxParams()
    problem = Problem(problem)
    if problem not in RELAXABLE:
        raise UnsupportedProblem(f"relaxation does not support {problem}")
    check_instance(problem, instance)
    annealer = Annealer(problem, instance)
    rng = restart_rng(params.seed, 0)
    n = instance.n
    stages = []

    if problem in (Problem.MIS, Problem.CLIQUE, Problem.MVC):
        grow = problem != Problem.MVC
        k = 1 if grow else n - 1
        feasible = State(rng.permutation(n), k=1 if grow else n)
        warm = None
        while (1 <= k <= n) if grow else (k >= 0):
            st, summary = _relax_stage(problem, instance, k, params, rng, annealer, warm)
            st = _polish(annealer, st, rng, params)
            summary["feasible"] = annealer.score(st)[1] == 0
            stages.append(summary)
            if not summary["feasible"]:
                break
            feasible, warm = st, st.perm
            k = k + 1 if grow else k - 1
        final = feasible
    else:
        k = max(1, n // 2) if problem == Problem.MAXCUT else None
        st, summary = _relax_stage(problem, instance, k, params, rng, annealer, None)
        final = _polish(annealer, st, rng, params)
        stages.append(summary)

    cand = final.candidate(problem)
    return SolveResult(cand, evaluate(instance, cand), "relax", {"stages": stages})


def penalized_energy(problem, instance, cand: CandidateSolution, penalty: float) -> float:
    """Discrete counterpart of :func:`relaxed_objective` at a permutation vertex."""
    return energy(problem, evaluate(instance, cand), penalty)
