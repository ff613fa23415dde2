"""Critical exponents eta, eta2 and nu as epsilon series at a fixed point."""
from __future__ import annotations

from dataclasses import dataclass

from .algebra import EpsSeries, series_reciprocal
from .beta_system import ETA2_POLY, ETA_POLY
from .fixed_points import FixedPoint

__all__ = ["ExponentSet", "eta_at", "eta2_at", "nu_at", "exponents_at"]

REAL_TOL = 1e-12


@dataclass(frozen=True)
class ExponentSet:
    label: str
    eta: EpsSeries
    eta2: EpsSeries
    nu: EpsSeries
    is_real: bool
    k_used: object


def eta_at(fp: FixedPoint) -> EpsSeries:
    """Anomalous dimension of the field at ``fp``."""
    return ETA_POLY.eval_series(fp.coords)


def eta2_at(fp: FixedPoint) -> EpsSeries:
    return ETA2_POLY.eval_series(fp.coords)


def nu_at(fp: FixedPoint) -> EpsSeries:
    """Correlation-length exponent ``1/(2 + eta2)``."""
    return series_reciprocal(eta2_at(fp) + 2)


def exponents_at(fp: FixedPoint, real_tol: float = REAL_TOL) -> ExponentSet:
    eta = eta_at(fp)
    eta2 = eta2_at(fp)
    nu = series_reciprocal(eta2 + 2)
    real = max(eta.max_imag(), eta2.max_imag(), nu.max_imag()) < real_tol
    return ExponentSet(fp.label, eta, eta2, nu, real, fp.k)
