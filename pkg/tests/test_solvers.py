import itertools

import numpy as np
import pytest

from permform.core import Graph, Permutation, perm_matrix
from permform.formulations import (
    CandidateSolution,
    GiInstance,
    Problem,
    SatInstance,
    TspInstance,
    energy,
    evaluate,
    extract_solution,
)
from permform.generators import random_gi, random_graph, random_qap, random_tsp
from permform.oracles import brute_oracle
from permform.solvers import (
    RELAXABLE,
    AnnealParams,
    RelaxParams,
    UnsupportedProblem,
    anneal,
    relax_solve,
    relaxed_objective,
    residual,
    round_to_permutation,
    sinkhorn_normalize,
    with_overrides,
)

from conftest import cycle, fd_relative_error

FAST = AnnealParams(iterations=3000)


def ring(n):
    cost = np.array([[min(abs(i - j), n - abs(i - j)) for j in range(n)] for i in range(n)])
    return TspInstance(cost)


def relax_instance(problem, seed):
    if problem == Problem.TSP:
        return random_tsp(5, seed, integer=False, symmetric=False)
    if problem == Problem.QAP:
        return random_qap(5, seed)
    if problem == Problem.GI:
        return random_gi(5, 0.5, seed)
    return random_graph(6, 0.5, seed)


# -- Sinkhorn and rounding ---------------------------------------------------


def test_sinkhorn_fixed_point():
    P = perm_matrix(Permutation.from_one_based((2, 4, 1, 3)))
    out = sinkhorn_normalize(P + 1e-9, iters=200, tol=1e-6)
    assert out.residual <= 1e-6
    assert np.abs(out.entries - P).max() < 1e-6


def test_sinkhorn_all_ones():
    out = sinkhorn_normalize(np.ones((5, 5)))
    assert np.allclose(out.entries, 0.2) and out.iterations == 1 and out.residual == 0


def test_sinkhorn_random_6x6():
    rng = np.random.default_rng(3)
    out = sinkhorn_normalize(rng.uniform(0.1, 2.0, (6, 6)), iters=200, tol=1e-8)
    assert out.iterations <= 200 and residual(out.entries) <= 1e-8


def test_sinkhorn_rejects_nonpositive():
    with pytest.raises(ValueError):
        sinkhorn_normalize(np.array([[1.0, 0.0], [1.0, 1.0]]))
    with pytest.raises(ValueError):
        sinkhorn_normalize(np.ones((2, 3)))


def test_round_examples():
    pi = Permutation.from_one_based((3, 1, 2, 5, 4))
    assert round_to_permutation(perm_matrix(pi)) == pi
    assert round_to_permutation(np.full((4, 4), 0.25)) == Permutation.identity(4)


@pytest.mark.parametrize("n", [2, 3, 5, 7])
def test_round_matches_enumeration(n):
    rng = np.random.default_rng(n)
    for _ in range(5):
        S = sinkhorn_normalize(rng.uniform(0.01, 1.0, (n, n)), iters=100).entries
        best = max(S[np.arange(n), list(p)].sum() for p in itertools.permutations(range(n)))
        got = round_to_permutation(S)
        assert S[np.arange(n), got.idx].sum() == pytest.approx(best, abs=1e-12)


# -- relaxed objective -------------------------------------------------------


def _k_for(problem, n, rng):
    if problem == Problem.MAXCUT:
        return int(rng.integers(1, n))
    if problem == Problem.MVC:
        return int(rng.integers(0, n + 1))
    if problem in (Problem.MIS, Problem.CLIQUE):
        return int(rng.integers(1, n + 1))
    return None


@pytest.mark.parametrize("problem", sorted(RELAXABLE, key=lambda p: p.value))
def test_relaxation_tight_at_vertices(problem):
    rng = np.random.default_rng(1)
    for seed in range(5):
        inst = relax_instance(problem, seed)
        pi = Permutation(rng.permutation(inst.n))
        k = _k_for(problem, inst.n, rng)
        value, _ = relaxed_objective(problem, inst, perm_matrix(pi), 7.0, k)
        cand = CandidateSolution(problem, pi, k=k)
        assert value == pytest.approx(energy(problem, evaluate(inst, cand), 7.0), abs=1e-9)


@pytest.mark.parametrize("problem", sorted(RELAXABLE, key=lambda p: p.value))
def test_gradient_finite_differences(problem):
    rng = np.random.default_rng(2)
    inst = relax_instance(problem, 4)
    S = sinkhorn_normalize(rng.uniform(0.1, 1.0, (inst.n, inst.n))).entries
    assert fd_relative_error(problem, inst, S, k=_k_for(problem, inst.n, rng)) < 1e-4


def test_gi_identity_minimum():
    G = random_graph(5, 0.5, seed=1)
    value, grad = relaxed_objective(Problem.GI, GiInstance(G, G), np.eye(5), 1.0)
    assert value == 0 and not grad.any()


def test_relaxed_objective_errors(mis5, sat4):
    with pytest.raises(UnsupportedProblem):
        relaxed_objective(Problem.SAT, sat4, np.eye(13), 1.0)
    with pytest.raises(UnsupportedProblem):
        relaxed_objective(Problem.MDS, mis5, np.eye(5), 1.0, k=2)
    with pytest.raises(ValueError):
        relaxed_objective(Problem.MIS, mis5, np.eye(4), 1.0, k=2)
    with pytest.raises(ValueError):
        relaxed_objective(Problem.MIS, mis5, np.eye(5), 1.0)


# -- annealing ---------------------------------------------------------------


def test_anneal_mis5_default(mis5):
    res = anneal(Problem.MIS, mis5, AnnealParams(seed=5))
    assert res.feasible and res.candidate.k == 3


def test_anneal_edgeless_mis():
    res = anneal(Problem.MIS, Graph.empty(6), FAST)
    assert res.feasible and res.candidate.k == 6


def test_anneal_sat4(sat4):
    res = anneal(Problem.SAT, sat4, AnnealParams(seed=42))
    assert res.feasible
    assert sat4.evaluate(extract_solution(sat4, res.candidate).values)


@pytest.mark.parametrize("problem", [Problem.MIS, Problem.MVC, Problem.MDS, Problem.CLIQUE, Problem.MAXCUT, Problem.COLORING])
def test_anneal_reaches_oracle_on_small_graphs(problem):
    G = random_graph(6, 0.5, seed=1)
    res = anneal(problem, G, AnnealParams(seed=0, iterations=5000))
    assert res.feasible
    assert res.objective == brute_oracle(problem, G).optimum


def test_anneal_tsp_qap_gi():
    res = anneal(Problem.TSP, ring(5), AnnealParams(seed=7, iterations=5000))
    assert res.objective == 5
    inst = random_qap(5, seed=3)
    assert anneal(Problem.QAP, inst, AnnealParams(iterations=5000)).objective == brute_oracle(Problem.QAP, inst).optimum
    res = anneal(Problem.GI, random_gi(6, 0.5, seed=2), AnnealParams(iterations=5000))
    assert res.feasible and res.objective == 0


def test_anneal_unsat_reports_infeasible():
    res = anneal(Problem.SAT, SatInstance(1, ((1,), (-1,))), FAST)
    assert not res.feasible


def test_anneal_determinism(mis5):
    a = anneal(Problem.COLORING, mis5, AnnealParams(seed=9, iterations=2000, restarts=3))
    b = anneal(Problem.COLORING, mis5, AnnealParams(seed=9, iterations=2000, restarts=3))
    assert a.candidate == b.candidate and a.summary == b.summary
    assert len(a.summary["restart_energies"]) == 3


def test_anneal_feasibility_is_exact():
    for seed in range(4):
        G = random_graph(7, 0.6, seed)
        for problem in (Problem.MIS, Problem.MVC, Problem.MDS):
            res = anneal(problem, G, AnnealParams(seed=seed, iterations=500))
            assert res.feasible == evaluate(G, res.candidate).feasible


# -- relax_solve -------------------------------------------------------------


def test_relax_mis5(mis5):
    res = relax_solve(Problem.MIS, mis5, RelaxParams(seed=0))
    assert res.feasible and res.candidate.k == 3


def test_relax_ring_tsp():
    assert relax_solve(Problem.TSP, ring(5), RelaxParams(seed=0)).objective == 5


def test_relax_c4_gi():
    c4 = cycle(4)
    relabeled = Graph.from_edges(4, [(1, 3), (3, 2), (2, 4), (4, 1)])
    res = relax_solve(Problem.GI, GiInstance(c4, relabeled), RelaxParams(seed=0))
    assert res.feasible and res.objective == 0


@pytest.mark.parametrize("problem", [Problem.MVC, Problem.CLIQUE, Problem.MAXCUT])
def test_relax_graph_problems_feasible(problem, mis5):
    res = relax_solve(problem, mis5, RelaxParams(seed=1, steps=200))
    assert res.feasible
    assert res.objective == brute_oracle(problem, mis5).optimum


def test_relax_unsupported(sat4, mis5):
    with pytest.raises(UnsupportedProblem):
        relax_solve(Problem.SAT, sat4)
    with pytest.raises(UnsupportedProblem):
        relax_solve(Problem.MDS, mis5)


def test_relax_determinism(mis5):
    a = relax_solve(Problem.MIS, mis5, RelaxParams(seed=3, steps=100))
    b = relax_solve(Problem.MIS, mis5, RelaxParams(seed=3, steps=100))
    assert a.candidate == b.candidate and a.summary == b.summary


# -- params ------------------------------------------------------------------


def test_params_validation_and_overrides():
    with pytest.raises(ValueError):
        AnnealParams(cooling_rate=1.0)
    with pytest.raises(ValueError):
        RelaxParams(steps=0)
    p = with_overrides(AnnealParams(), {"iterations": "2e3", "cooling_rate": "0.99"})
    assert p.iterations == 2000 and p.cooling_rate == 0.99
    with pytest.raises(ValueError):
        with_overrides(RelaxParams(), {"nope": 1})
