"""Epsilon-approximate solutions of separable concave integer quadratic programs."""

from .gen import gen_general_delta, gen_interval, gen_network
from .ilp import IlpOutcome, IlpUndecided, solve_ilp
from .lp import LpOutcome, LpProblem, solve_lp
from .matprops import DeltaCertificate, is_totally_unimodular, max_abs_subdeterminant
from .model import Instance, SolveConfig, SolveReport, SolveStats, Subproblem, validate
from .numeric import ceil_sqrt
from .oracle import OracleResult, enumerate_box, verify_eps
from .solver import compute_grid_size, sandwich_epsilon, solve

__all__ = [
    "DeltaCertificate", "IlpOutcome", "IlpUndecided", "Instance", "LpOutcome", "LpProblem",
    "OracleResult", "SolveConfig", "SolveReport", "SolveStats", "Subproblem", "ceil_sqrt",
    "compute_grid_size", "enumerate_box", "gen_general_delta", "gen_interval", "gen_network",
    "is_totally_unimodular", "max_abs_subdeterminant", "sandwich_epsilon", "solve", "solve_ilp",
    "solve_lp", "validate", "verify_eps",
]
