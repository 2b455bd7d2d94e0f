"""2D Stokes-Brinkman flow solver and density-based topology optimization
of inlet-manifold geometry (flow uniformity vs viscous dissipation)."""

from .grid import DensityField, Grid2D, Segment
from .problem import TopoProblem, default_alpha_bounds, inverse_permeability
from .solver import FlowSolution, StokesOperator, solve_flow
from .objective import ObjectiveValue, gradient, objective
from .optimize import OptimizeResult, optimize
from .io import export_density, parse_problem_file, write_fields, write_history

__all__ = [
    "DensityField", "Grid2D", "Segment", "TopoProblem",
    "default_alpha_bounds", "inverse_permeability", "FlowSolution",
    "StokesOperator", "solve_flow", "ObjectiveValue", "gradient", "objective",
    "OptimizeResult", "optimize", "export_density", "parse_problem_file",
    "write_fields", "write_history",
]
