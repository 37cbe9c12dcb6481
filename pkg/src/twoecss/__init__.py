"""Approximation tools for the minimum 2-edge-connected spanning subgraph problem."""

from .errors import TwoEcssError
from .graph_core import Graph
from .instances import generate, parse_spec, read_graph, write_graph
from .kernels import BACKEND_NAME
from .oracle import OracleLimits, exact_2ecss, verify_2ec_spanning
from .pipeline import SolveReport, baseline_2approx, ratio_envelope_check, solve
from .reduction import ReductionParams

__all__ = [
    "BACKEND_NAME", "Graph", "OracleLimits", "ReductionParams", "SolveReport", "TwoEcssError",
    "baseline_2approx", "exact_2ecss", "generate", "parse_spec", "ratio_envelope_check",
    "read_graph", "solve", "verify_2ec_spanning", "write_graph",
]
__version__ = "0.1.0"
