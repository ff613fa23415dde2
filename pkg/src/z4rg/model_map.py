"""Physical couplings (u, v, w) versus tensor couplings, PT phase, loop factor."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "UNBROKEN",
    "BROKEN",
    "EXCEPTIONAL",
    "ModelCouplings",
    "physical_to_tensor",
    "tensor_to_physical",
    "pt_phase",
    "hermitian_equivalent_coupling",
    "nd_constant",
    "to_tilde",
]

UNBROKEN = "unbroken"
BROKEN = "broken"
EXCEPTIONAL = "exceptional"


@dataclass(frozen=True)
class ModelCouplings:
    """Quartic couplings of the U(1) part (``u``) and the Z4 anisotropy (``v``, ``w``).

    ``m2`` is carried along but never evolved.
    """

    u: object
    v: object
    w: object
    m2: object = 0

    def __post_init__(self):
        if not self.u > 0:
            raise ValueError(f"u must be positive, got {self.u!r}")

    @property
    def k(self):
        """RG invariant ``g3/g2 = w/v``."""
        if self.v == 0:
            raise ZeroDivisionError("v = 0: k is undefined")
        return self.w / self.v


def physical_to_tensor(mc: ModelCouplings):
    """``(g1, g2, g3) = (3(u - 6v), 24 v, 24 w)``; exact for Fraction input."""
    return 3 * (mc.u - 6 * mc.v), 24 * mc.v, 24 * mc.w


def tensor_to_physical(g1, g2, g3, m2=0) -> ModelCouplings:
    v = _div(g2, 24)
    return ModelCouplings(_div(g1, 3) + 6 * v, v, _div(g3, 24), m2)


def _div(x, n):
    if isinstance(x, (int, Fraction)):
        return Fraction(x, 1) / n
    return x / n


def pt_phase(v, w, tol: float = 0.0) -> str:
    if tol < 0:
        raise ValueError("tol must be non-negative")
    d = v * v - w * w
    if d > tol:
        return UNBROKEN
    if d < -tol:
        return BROKEN
    return EXCEPTIONAL


def hermitian_equivalent_coupling(v, w) -> complex:
    """``sqrt(v^2 - w^2)`` on the principal branch (``+i`` side when broken)."""
    return cmath.sqrt(v * v - w * w)


def nd_constant(d: float) -> float:
    """Loop factor ``N_d = 2 / ((4 pi)^(d/2) Gamma(d/2))``."""
    if d <= 0:
        raise ValueError("d must be positive")
    return 2.0 / ((4 * math.pi) ** (d / 2) * math.gamma(d / 2))


def to_tilde(g, d: float = 4):
    """Rescale raw couplings to the tilde units used everywhere else."""
    n = nd_constant(d)
    if isinstance(g, (tuple, list)):
        return type(g)(n * x for x in g)
    return n * g
