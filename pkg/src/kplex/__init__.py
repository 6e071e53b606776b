"""Maximum k-plex search: breakout local search with a learned perturbation schedule."""
from .controller import Controller, ControllerConfig, ParameterTriple, generate_space, prelearn
from .estimator import MaxKPlex
from .graph import DimacsParseError, Graph, neighbors, parse_dimacs, read_dimacs, to_dimacs, write_dimacs
from .harness import RunReport, emit_report, run_experiment
from .oracle import brute_force_max_kplex, exact_max_kplex, exact_max_kplex_set
from .solver import SolverResult, solve, solve_rle, solve_rnd
from .state import InfeasibleError, KPlexState, NeighborhoodSets, classify, new_state
from .validation import check_graph, check_k

__all__ = [
    "Controller", "ControllerConfig", "DimacsParseError", "Graph", "InfeasibleError", "KPlexState",
    "MaxKPlex", "NeighborhoodSets", "ParameterTriple", "RunReport", "SolverResult", "brute_force_max_kplex",
    "check_graph", "check_k", "classify", "emit_report", "exact_max_kplex", "exact_max_kplex_set",
    "generate_space", "neighbors", "new_state", "parse_dimacs", "prelearn", "read_dimacs", "run_experiment",
    "solve", "solve_rle", "solve_rnd", "to_dimacs", "write_dimacs",
]
__version__ = "0.1.0"
