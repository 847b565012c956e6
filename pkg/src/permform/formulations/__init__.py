from .evaluate import Evaluation, as_encoding, check_instance, energy, evaluate, extract_solution, instance_size
from .graphs import (
    clique_violation,
    coloring_violation,
    gi_distance,
    maxcut_value,
    mds_coverage,
    mds_violation,
    mis_violation,
    mvc_violation,
)
from .problems import (
    GRAPH_PROBLEMS,
    MAXIMIZE,
    SIZED,
    CandidateSolution,
    GiInstance,
    InfeasibleCandidate,
    Problem,
    QapInstance,
    SatAssignment,
    SatInstance,
    TspInstance,
)
from .routing import qap_value, tsp_heatmap, tsp_length, tsp_trace_length
from .sat import (
    SatEncoding,
    literal_vertex,
    sat_check,
    sat_encode,
    sat_extract,
    sat_feasible,
    sat_permutation,
    sat_violation,
    vertex_literal,
)
