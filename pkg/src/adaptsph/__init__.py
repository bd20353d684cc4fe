"""Weakly compressible SPH with adaptive B-spline kernels for Oldroyd-B flows."""

__version__ = "0.1.0"

from .constitutive import MaterialParams
from .errors import ConfigurationError, DataError, SimulationError
from .kernel import KernelSpec, KnotPair, adapt_knots, evaluate
from .particles import Particles
from .solver import Solver, SolverSettings

__all__ = [
    "ConfigurationError",
    "DataError",
    "KernelSpec",
    "KnotPair",
    "MaterialParams",
    "Particles",
    "SimulationError",
    "Solver",
    "SolverSettings",
    "adapt_knots",
    "evaluate",
]
