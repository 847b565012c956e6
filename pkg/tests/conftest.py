from pathlib import Path

import numpy as np
import pytest

from permform.core import Graph
from permform.formulations import SatInstance

DATA = Path(__file__).parent / "data"

MIS5_EDGES = [(1, 2), (1, 3), (2, 3), (2, 4), (2, 5), (3, 4), (3, 5)]
MIS5_A1 = np.array(
    [
        [0, 1, 1, 0, 0],
        [1, 0, 1, 1, 1],
        [1, 1, 0, 1, 1],
        [0, 1, 1, 0, 0],
        [0, 1, 1, 0, 0],
    ]
)
MIS5_A2 = np.array(
    [
        [0, 0, 0, 1, 1],
        [0, 0, 0, 1, 1],
        [0, 0, 0, 1, 1],
        [1, 1, 1, 0, 1],
        [1, 1, 1, 1, 0],
    ]
)
MIS5_PI = (1, 4, 5, 2, 3)

SAT4_CLAUSES = ((1, 2, -3), (-1, 3, 4), (2, -4), (-2, -3, 4), (1, -4))
SAT4_V = np.kron(np.eye(4, dtype=int), np.array([[0, 1], [1, 0]]))
SAT4_B = np.array(
    [
        [1, 0, 1, 0, 0, 1, 0, 0],
        [0, 1, 0, 0, 1, 0, 1, 0],
        [0, 0, 1, 0, 0, 0, 0, 1],
        [0, 0, 0, 1, 0, 1, 1, 0],
        [1, 0, 0, 0, 0, 0, 0, 1],
    ]
)
# (permutation, truth values) for the five listed satisfying assignments
SAT4_ASSIGNMENTS = [
    ((1, 3, 5, 7, 2, 4, 6, 8, 9, 10, 11, 12, 13), (True, True, True, True)),
    ((1, 3, 6, 7, 2, 4, 5, 8, 9, 10, 11, 12, 13), (True, True, False, True)),
    ((1, 4, 5, 8, 2, 3, 6, 7, 9, 10, 11, 12, 13), (True, False, True, False)),
    ((2, 3, 6, 8, 1, 4, 5, 7, 9, 10, 11, 12, 13), (False, True, False, False)),
    ((2, 4, 6, 8, 1, 3, 5, 7, 9, 10, 11, 12, 13), (False, False, False, False)),
]


@pytest.fixture
def mis5():
    return Graph.from_edges(5, MIS5_EDGES)


@pytest.fixture
def sat4():
    return SatInstance(4, SAT4_CLAUSES)


def cycle(n):
    return Graph.from_edges(n, [(i, i % n + 1) for i in range(1, n + 1)])


def bipartite(a, b):
    return Graph.from_edges(a + b, [(u, v) for u in range(1, a + 1) for v in range(a + 1, a + b + 1)])


def star(leaves):
    return Graph.from_edges(leaves + 1, [(1, v) for v in range(2, leaves + 2)])


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)])


def fd_relative_error(problem, instance, S, penalty=3.0, k=None, h=1e-5):
    """Max relative error of the analytic gradient of ``relaxed_objective`` against central differences."""
    from permform.solvers import relaxed_objective

    _, grad = relaxed_objective(problem, instance, S, penalty, k)
    fd = np.zeros_like(S)
    for i in range(S.shape[0]):
        for j in range(S.shape[1]):
            E = np.zeros_like(S)
            E[i, j] = h
            up = relaxed_objective(problem, instance, S + E, penalty, k)[0]
            down = relaxed_objective(problem, instance, S - E, penalty, k)[0]
            fd[i, j] = (up - down) / (2 * h)
    scale = max(np.abs(fd).max(), np.abs(grad).max(), 1e-12)
    return float(np.abs(grad - fd).max() / scale)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
