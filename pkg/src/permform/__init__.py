"""Combinatorial optimization problems written as optimization over permutation matrices."""

from .core import Graph, Permutation, TruncationSpec, perm_matrix, relabel, trace_product, truncation_matrix
from .formulations import CandidateSolution, Problem, evaluate

__version__ = "0.1.0"
