"""Largest-small-polygon optimization laboratory.

Models, solver, oracles, experiments, regression fits, and SVG
rendering for the unit-diameter polygon of maximal area.
"""

from .model import ModelSpec, NlpProblem, PolygonConfig, Variant, build_problem
from .oracle import fd_check, grid_search_small, regular_polygon_area
from .solver import SolveReport, SolverOptions, solve

__all__ = [
    "ModelSpec",
    "NlpProblem",
    "PolygonConfig",
    "Variant",
    "build_problem",
    "fd_check",
    "grid_search_small",
    "regular_polygon_area",
    "SolveReport",
    "SolverOptions",
    "solve",
]

__version__ = "0.1.0"
