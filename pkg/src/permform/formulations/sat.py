"""CNF formulas as a literal/clause graph with two selector matrices.

Vertex order (1-based): ``x1, -x1, x2, -x2, ..., xn, -xn`` then clauses
``C1..Cm``.  A permutation selects the literals made true by placing them in
positions ``1..n``; positions ``2n+1..N`` must hold the clauses in order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import Permutation, _frozen, relabel
from .problems import InfeasibleCandidate, SatAssignment, SatInstance


def literal_vertex(lit: int) -> int:
    """0-based vertex index of a signed literal."""
    return 2 * (abs(lit) - 1) + (0 if lit > 0 else 1)


def vertex_literal(v: int) -> int:
    """Signed literal held by 0-based literal vertex ``v``."""
    var = v // 2 + 1
    return var if v % 2 == 0 else -var


@dataclass(frozen=True, eq=False)
class SatEncoding:
    n_vars: int
    m_clauses: int
    conflict: np.ndarray  # V, 2n x 2n
    incidence: np.ndarray  # B, m x 2n
    A: np.ndarray
    T: np.ndarray  # clause selector
    C: np.ndarray  # true-literal selector

    @property
    def N(self) -> int:
        return 2 * self.n_vars + self.m_clauses


def sat_encode(inst: SatInstance) -> SatEncoding:
    n, m = inst.num_vars, inst.num_clauses
    N = 2 * n + m
    V = np.zeros((2 * n, 2 * n), dtype=np.int64)
    for var in range(n):
        V[2 * var, 2 * var + 1] = V[2 * var + 1, 2 * var] = 1
    B = np.zeros((m, 2 * n), dtype=np.int64)
    for c, clause in enumerate(inst.clauses):
        for lit in clause:
            B[c, literal_vertex(lit)] = 1
    A = np.block([[V, B.T], [B, np.zeros((m, m), dtype=np.int64)]])
    T = np.zeros((N, N), dtype=np.int64)
    T[2 * n :, 2 * n :] = np.eye(m, dtype=np.int64)
    C = np.zeros((N, N), dtype=np.int64)
    C[:n, :n] = np.eye(n, dtype=np.int64)
    return SatEncoding(n, m, *(_frozen(x) for x in (V, B, A, T, C)))


def check_clause_block(enc: SatEncoding, pi: Permutation) -> None:
    if pi.n != enc.N:
        raise ValueError(f"permutation has size {pi.n}, encoding has N = {enc.N}")
    tail = pi.idx[2 * enc.n_vars :]
    if not np.array_equal(tail, np.arange(2 * enc.n_vars, enc.N)):
        raise ValueError("permutation must fix the clause vertices in positions 2n+1..N")


def sat_check(enc: SatEncoding, pi: Permutation) -> tuple[int, np.ndarray]:
    """Return ``(complementarity, clause_cover)`` for a permutation of the encoding's vertices.

    ``complementarity`` is the entry sum of ``C P A P^T C``: twice the number of
    complementary pairs among the selected literals.  (Its trace alone is
    identically zero because ``A`` has no self-loops.)  ``clause_cover`` is
    ``T P A P^T C 1_N``; its last ``m`` entries count the true literals of each
    clause.
    """
    check_clause_block(enc, pi)
    M = relabel(enc.A, pi)
    complementarity = int((enc.C @ M @ enc.C).sum())
    cover = enc.T @ M @ enc.C @ np.ones(enc.N, dtype=np.int64)
    return complementarity, cover


def sat_violation(enc: SatEncoding, pi: Permutation) -> int:
    """Complementarity plus the number of clauses with no selected literal."""
    comp, cover = sat_check(enc, pi)
    return comp + int(np.count_nonzero(cover[2 * enc.n_vars :] < 1))


def sat_feasible(enc: SatEncoding, pi: Permutation) -> bool:
    comp, cover = sat_check(enc, pi)
    return comp == 0 and bool(np.all(cover[2 * enc.n_vars :] >= 1))


def sat_extract(enc: SatEncoding, pi: Permutation) -> SatAssignment:
    """Truth assignment read from the literals in the first ``n`` positions."""
    if not sat_feasible(enc, pi):
        raise InfeasibleCandidate("permutation violates the complementarity or clause constraints")
    values = [None] * enc.n_vars
    for v in pi.idx[: enc.n_vars]:
        lit = vertex_literal(int(v))
        values[abs(lit) - 1] = lit > 0
    return SatAssignment(tuple(values))


def sat_permutation(enc: SatEncoding, assignment) -> Permutation:
    """Canonical permutation for an assignment: true literals by variable, then the rest, then clauses."""
    values = assignment.values if isinstance(assignment, SatAssignment) else tuple(assignment)
    if len(values) != enc.n_vars:
        raise ValueError("assignment length does not match the number of variables")
    true_lits = [literal_vertex(v if val else -v) for v, val in enumerate(values, 1)]
    false_lits = [literal_vertex(-v if val else v) for v, val in enumerate(values, 1)]
    clauses = list(range(2 * enc.n_vars, enc.N))
    return Permutation(np.array(true_lits + false_lits + clauses))
