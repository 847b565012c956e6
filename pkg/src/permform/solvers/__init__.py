from .anneal import PENALTY, Annealer, State, anneal
from .assignment import round_to_permutation
from .params import AnnealParams, RelaxParams, SolveResult, with_overrides
from .relax import RELAXABLE, UnsupportedProblem, penalized_energy, relax_solve, relaxed_objective
from .sinkhorn import DoublyStochastic, residual, sinkhorn_normalize
