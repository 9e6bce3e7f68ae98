"""Spectral problems -f'' + f/4 = z omega f + z^2 upsilon f with measure coefficients."""
from .errors import (BoundaryCollisionError, ConvergenceError, PreconditionError, QuadspecError,
                     SingularParameterError, ValidationError)
from .measures import CoefficientMeasure, Mesh, integrate_oriented, integration_by_parts_residual, support_mesh
from .problem import Bounded, HalfLine, Problem, WholeLine

__all__ = [
    "BoundaryCollisionError", "ConvergenceError", "PreconditionError", "QuadspecError",
    "SingularParameterError", "ValidationError",
    "CoefficientMeasure", "Mesh", "integrate_oriented", "integration_by_parts_residual", "support_mesh",
    "Bounded", "HalfLine", "Problem", "WholeLine",
]
