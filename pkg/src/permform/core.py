"""Permutations, graphs and the structured 0/1 matrices shared by every formulation.

Convention used throughout the package: the permutation matrix of ``pi`` has
``P[i, j] = 1`` iff ``pi(i) = j``, so ``P @ A @ P.T`` has entry ``(i, j)`` equal
to ``A[pi(i), pi(j)]``.  Labels are 1-based at every public boundary; arrays
are 0-based internally.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

PREFIX = "prefix-block"
CROSS = "cross-block"
SUFFIX = "suffix-block"
DIAGONAL = "diagonal-blocks"
TRUNCATION_KINDS = (PREFIX, CROSS, SUFFIX, DIAGONAL)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Permutation:
    """A bijection on ``{1..n}`` stored 0-based in ``idx``.

    ``idx[i] = pi(i+1) - 1``.  Use :meth:`from_one_based` for 1-based input.
    """

    idx: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.idx, dtype=np.int64)
        if idx.ndim != 1 or idx.size == 0:
            raise ValueError("permutation must be a non-empty 1-d sequence")
        if not np.array_equal(np.sort(idx), np.arange(idx.size)):
            raise ValueError(f"not a bijection on 1..{idx.size}: {(idx + 1).tolist()}")
        object.__setattr__(self, "idx", _frozen(idx))

    @classmethod
    def from_one_based(cls, values: Iterable[int]) -> "Permutation":
        return cls(np.asarray(list(values), dtype=np.int64) - 1)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(np.arange(n))

    @property
    def n(self) -> int:
        return int(self.idx.size)

    @property
    def map(self) -> tuple[int, ...]:
        """1-based image tuple ``(pi(1), ..., pi(n))``."""
        return tuple(int(v) + 1 for v in self.idx)

    def __call__(self, i: int) -> int:
        return int(self.idx[i - 1]) + 1

    def invert(self) -> "Permutation":
        inv = np.empty_like(self.idx)
        inv[self.idx] = np.arange(self.n)
        return Permutation(inv)

    def compose(self, other: "Permutation") -> "Permutation":
        """``(self o other)(i) = self(other(i))``."""
        if other.n != self.n:
            raise ValueError("cannot compose permutations of different size")
        return Permutation(self.idx[other.idx])

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and np.array_equal(self.idx, other.idx)

    def __hash__(self) -> int:
        return hash(self.map)

    def __repr__(self) -> str:
        return f"Permutation({list(self.map)})"


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph given by a dense symmetric 0/1 adjacency matrix."""

    adj: np.ndarray

    def __post_init__(self):
        adj = np.asarray(self.adj)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError("adjacency matrix must be square")
        if not np.isin(adj, (0, 1)).all():
            raise ValueError("adjacency matrix must be 0/1")
        adj = adj.astype(np.int64)
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency matrix must be symmetric")
        if np.any(np.diag(adj)):
            raise ValueError("adjacency matrix must have a zero diagonal (no self-loops)")
        object.__setattr__(self, "adj", _frozen(adj))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build from 1-based edge pairs; duplicates collapse."""
        adj = np.zeros((n, n), dtype=np.int64)
        for u, v in edges:
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"edge ({u}, {v}) out of range 1..{n}")
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            adj[u - 1, v - 1] = adj[v - 1, u - 1] = 1
        return cls(adj)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(np.zeros((n, n), dtype=np.int64))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(np.ones((n, n), dtype=np.int64) - np.eye(n, dtype=np.int64))

    @property
    def n(self) -> int:
        return int(self.adj.shape[0])

    @property
    def m(self) -> int:
        return int(self.adj.sum()) // 2

    def edges(self) -> list[tuple[int, int]]:
        """Sorted 1-based edge list with ``u < v``."""
        us, vs = np.nonzero(np.triu(self.adj, 1))
        return [(int(u) + 1, int(v) + 1) for u, v in zip(us, vs)]

    def complement(self) -> "Graph":
        return Graph(1 - self.adj - np.eye(self.n, dtype=np.int64))

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and np.array_equal(self.adj, other.adj)

    def __hash__(self) -> int:
        return hash((self.n, tuple(self.edges())))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"


@dataclass(frozen=True)
class TruncationSpec:
    """Which structured 0/1 matrix ``C`` a trace constraint multiplies against.

    ``prefix-block`` has ones where both indices are ``<= k``; ``suffix-block``
    where both are ``> k``; ``cross-block`` where exactly one is ``<= k``;
    ``diagonal-blocks`` is block diagonal with all-ones blocks of the given sizes.
    """

    kind: str
    k: int | None = None
    blocks: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in TRUNCATION_KINDS:
            raise ValueError(f"unknown truncation kind {self.kind!r}")
        if self.kind == DIAGONAL:
            if self.blocks is None or len(self.blocks) == 0:
                raise ValueError("diagonal-blocks requires a block composition")
            blocks = tuple(int(b) for b in self.blocks)
            if any(b < 1 for b in blocks):
                raise ValueError(f"block sizes must be >= 1, got {blocks}")
            object.__setattr__(self, "blocks", blocks)
            object.__setattr__(self, "k", len(blocks))
        elif self.k is None:
            raise ValueError(f"{self.kind} requires k")

    @classmethod
    def prefix(cls, k: int) -> "TruncationSpec":
        return cls(PREFIX, k)

    @classmethod
    def cross(cls, k: int) -> "TruncationSpec":
        return cls(CROSS, k)

    @classmethod
    def suffix(cls, k: int) -> "TruncationSpec":
        return cls(SUFFIX, k)

    @classmethod
    def diagonal(cls, blocks: Sequence[int]) -> "TruncationSpec":
        return cls(DIAGONAL, blocks=tuple(blocks))

    def check(self, n: int) -> None:
        """Raise ``ValueError`` unless this truncation is valid for dimension ``n``."""
        k = self.k
        if self.kind == PREFIX and not 1 <= k <= n:
            raise ValueError(f"prefix-block needs 1 <= k <= {n}, got {k}")
        if self.kind == CROSS and not 1 <= k < n:
            raise ValueError(f"cross-block needs 1 <= k < {n}, got {k}")
        # k = 0 is admitted so an edgeless graph's empty vertex cover is expressible
        if self.kind == SUFFIX and not 0 <= k <= n:
            raise ValueError(f"suffix-block needs 0 <= k <= {n}, got {k}")
        if self.kind == DIAGONAL and sum(self.blocks) != n:
            raise ValueError(f"block sizes {self.blocks} do not sum to {n}")

    def labels(self, n: int) -> np.ndarray:
        """Group label per position; ``C[i, j] = 1`` iff positions share a label
        (cross-block is the complement of that, see :func:`truncation_matrix`)."""
        self.check(n)
        if self.kind == DIAGONAL:
            return np.repeat(np.arange(len(self.blocks)), self.blocks)
        return (np.arange(n) >= self.k).astype(np.int64)


MatrixLike = Union[np.ndarray, TruncationSpec]


def perm_matrix(pi: Permutation) -> np.ndarray:
    P = np.zeros((pi.n, pi.n), dtype=np.int64)
    P[np.arange(pi.n), pi.idx] = 1
    return P


def relabel(A, pi: Permutation) -> np.ndarray:
    """Return ``P A P^T``, i.e. ``M[i, j] = A[pi(i), pi(j)]``."""
    A = np.asarray(A)
    if A.shape != (pi.n, pi.n):
        raise ValueError(f"matrix shape {A.shape} does not match permutation size {pi.n}")
    return A[np.ix_(pi.idx, pi.idx)]


def truncation_matrix(spec: TruncationSpec, n: int) -> np.ndarray:
    labels = spec.labels(n)
    same = (labels[:, None] == labels[None, :]).astype(np.int64)
    if spec.kind == PREFIX:
        return same * (labels[:, None] == 0)
    if spec.kind == SUFFIX:
        return same * (labels[:, None] == 1)
    if spec.kind == CROSS:
        return 1 - same
    return same


def _block_sum(M: np.ndarray, spec: TruncationSpec):
    n = M.shape[0]
    spec.check(n)
    if spec.kind == PREFIX:
        return M[: spec.k, : spec.k].sum()
    if spec.kind == SUFFIX:
        return M[spec.k :, spec.k :].sum()
    if spec.kind == CROSS:
        return M[: spec.k, spec.k :].sum() + M[spec.k :, : spec.k].sum()
    total = 0
    start = 0
    for size in spec.blocks:
        total += M[start : start + size, start : start + size].sum()
        start += size
    return total


def trace_product(M, C: MatrixLike):
    """``Tr(M @ C)``.

    When ``C`` is a :class:`TruncationSpec` the trace is evaluated as a block sum
    of ``M`` (every structured ``C`` here is symmetric, so ``Tr(MC)`` is the sum of
    ``M`` over the support of ``C``) without building ``C``.
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("trace_product needs a square matrix")
    if isinstance(C, TruncationSpec):
        return _block_sum(M, C).item()
    C = np.asarray(C)
    if C.shape != M.shape:
        raise ValueError(f"dimension mismatch {M.shape} vs {C.shape}")
    return np.einsum("ij,ji->", M, C).item()


def cycle_shift_matrix(n: int) -> np.ndarray:
    """Cyclic successor matrix: entry ``(i, j)`` is 1 iff ``j = (i mod n) + 1`` (1-based)."""
    if n < 2:
        raise ValueError(f"cycle shift needs n >= 2, got {n}")
    V = np.zeros((n, n), dtype=np.int64)
    V[np.arange(n), (np.arange(n) + 1) % n] = 1
    return V


def compositions(n: int, k: int):
    """Yield every ordered composition of ``n`` into ``k`` positive parts, lexicographically."""
    if k == 1:
        if n >= 1:
            yield (n,)
        return
    for first in range(1, n - k + 2):
        for rest in compositions(n - first, k - 1):
            yield (first,) + rest
