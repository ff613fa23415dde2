"""Two-loop RG analysis of a complex scalar with PT-symmetric Z4 anisotropy.

Couplings are the tilde-rescaled ``(g1, g2, g3)`` of the decomposition
``g = g1 S + g2 F + i g3 W``; everything is expanded in ``eps = 4 - d``.
"""

__version__ = "0.1.0"

from .algebra import CouplingPoly, EpsSeries, ExactScalar, series_reciprocal
from .beta_system import beta_full, beta_reduced, jacobian, rg_invariant
from .errors import ConvergenceError, DegenerateRootError, DomainError, ExceptionalPointError
from .exponents import ExponentSet, exponents_at
from .fixed_points import (
    FixedKind,
    FixedPoint,
    known_fixed_points,
    numeric_fixed_points,
    refine_numeric,
    solve_series,
    track_fixed_point,
)
from .flow import FlowTrajectory, integrate, integrate_batch, vector_field
from .model_map import ModelCouplings, nd_constant, physical_to_tensor, pt_phase
from .stability import StabilityReport, classify, classify_series
from .tensor_engine import beta_tensor, derive_rg_functions

__all__ = [
    "CouplingPoly",
    "EpsSeries",
    "ExactScalar",
    "series_reciprocal",
    "beta_full",
    "beta_reduced",
    "jacobian",
    "rg_invariant",
    "ConvergenceError",
    "DegenerateRootError",
    "DomainError",
    "ExceptionalPointError",
    "ExponentSet",
    "exponents_at",
    "FixedKind",
    "FixedPoint",
    "known_fixed_points",
    "numeric_fixed_points",
    "refine_numeric",
    "solve_series",
    "track_fixed_point",
    "FlowTrajectory",
    "integrate",
    "integrate_batch",
    "vector_field",
    "ModelCouplings",
    "nd_constant",
    "physical_to_tensor",
    "pt_phase",
    "StabilityReport",
    "classify",
    "classify_series",
    "beta_tensor",
    "derive_rg_functions",
]
