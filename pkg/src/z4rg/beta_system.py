"""Component beta functions, the reduced system at fixed k, and the Jacobian.

The beta functions are hard-coded here for speed.  The tensor contraction in
:mod:`z4rg.tensor_engine` derives the same polynomials and the test-suite
demands exact agreement between the two.

Every beta function has the form ``beta_a = -eps * g_a + P_a(g)`` where
``P_a`` is a :class:`CouplingPoly` of degree 2 and 3.
"""
from __future__ import annotations

from fractions import Fraction as Fr

import numpy as np

from .algebra import CouplingPoly, EpsSeries, ExactScalar, poly_eval_series, poly_partial

__all__ = [
    "BETA_LOOPS",
    "ETA_POLY",
    "ETA2_POLY",
    "X_POLY",
    "beta_full",
    "beta_reduced",
    "jacobian",
    "jacobian_series",
    "beta_series",
    "rg_invariant",
]


def _poly(*terms) -> CouplingPoly:
    return CouplingPoly({exps: Fr(c) for exps, c in terms})


# loop parts P_a(g); the -eps g_a piece is added explicitly
BETA_LOOPS: tuple[CouplingPoly, CouplingPoly, CouplingPoly] = (
    _poly(
        ((2, 0, 0), "5/3"),
        ((1, 1, 0), "1"),
        ((0, 0, 2), "-3/16"),
        ((3, 0, 0), "-5/3"),
        ((2, 1, 0), "-11/6"),
        ((1, 2, 0), "-5/12"),
        ((1, 0, 2), "23/48"),
        ((0, 1, 2), "3/8"),
    ),
    _poly(
        ((0, 2, 0), "3/2"),
        ((1, 1, 0), "2"),
        ((0, 3, 0), "-17/12"),
        ((2, 1, 0), "-23/9"),
        ((1, 2, 0), "-23/6"),
        ((0, 1, 2), "-1/48"),
    ),
    _poly(
        ((0, 1, 1), "3/2"),
        ((1, 0, 1), "2"),
        ((0, 0, 3), "-1/48"),
        ((2, 0, 1), "-23/9"),
        ((0, 2, 1), "-17/12"),
        ((1, 1, 1), "-23/6"),
    ),
)

# common factor of the last two beta functions: beta2 = g2 X, beta3 = g3 X
X_POLY: CouplingPoly = BETA_LOOPS[1].div_monomial((0, 1, 0))

_ETA_BRACKET = _poly(((2, 0, 0), "4/3"), ((0, 2, 0), "1"), ((1, 1, 0), "2"), ((0, 0, 2), "-1/4"))
ETA_POLY: CouplingPoly = _ETA_BRACKET * ExactScalar(Fr(1, 24))
ETA2_POLY: CouplingPoly = (
    _poly(((1, 0, 0), "4/3"), ((0, 1, 0), "1")) * ExactScalar(Fr(-1, 2))
    + _ETA_BRACKET * ExactScalar(Fr(5, 24))
)

_PARTIALS = tuple(tuple(poly_partial(p, v) for v in (1, 2, 3)) for p in BETA_LOOPS)


def beta_full(g, eps):
    """Evaluate ``(beta1, beta2, beta3)`` at ``g = (g1, g2, g3)``.

    Works on scalars or on numpy arrays of any common shape, which lets the
    flow integrator push a whole batch of trajectories at once.
    """
    g1, g2, g3 = g
    g1s, g2s, g3s = g1 * g1, g2 * g2, g3 * g3
    b1 = (
        -eps * g1
        + 5 / 3 * g1s
        + g1 * g2
        - 3 / 16 * g3s
        - 5 / 3 * g1s * g1
        - 11 / 6 * g1s * g2
        - 5 / 12 * g1 * g2s
        + 23 / 48 * g1 * g3s
        + 3 / 8 * g2 * g3s
    )
    x = -eps + 1.5 * g2 + 2 * g1 - 17 / 12 * g2s - 23 / 9 * g1s - 23 / 6 * g1 * g2 - g3s / 48
    return b1, g2 * x, g3 * x


def beta_reduced(g1, g2, k, eps):
    """``(beta1, beta2)`` on the plane ``g3 = k g2``."""
    k2 = k * k
    g1s, g2s = g1 * g1, g2 * g2
    b1 = (
        -eps * g1
        + 5 / 3 * g1s
        + g1 * g2
        - 3 * k2 / 16 * g2s
        - 5 / 3 * g1s * g1
        - 11 / 6 * g1s * g2
        + (23 * k2 / 48 - 5 / 12) * g1 * g2s
        + 3 * k2 / 8 * g2s * g2
    )
    b2 = (
        -eps * g2
        + 1.5 * g2s
        + 2 * g1 * g2
        - (k2 / 48 + 17 / 12) * g2s * g2
        - 23 / 9 * g1s * g2
        - 23 / 6 * g1 * g2s
    )
    return b1, b2


def jacobian(g, eps) -> np.ndarray:
    """Stability matrix ``M_ab = d beta_a / d g_b`` as a complex 3x3 array."""
    g = tuple(complex(x) for x in g)
    M = np.empty((3, 3), dtype=complex)
    for a in range(3):
        for b in range(3):
            M[a, b] = _PARTIALS[a][b](*g) - (eps if a == b else 0)
    return M


def jacobian_reduced(g1, g2, k, eps) -> np.ndarray:
    """2x2 Jacobian of :func:`beta_reduced` in ``(g1, g2)``."""
    M = jacobian((g1, g2, k * g2), eps)
    # chain rule through g3 = k g2
    return np.array(
        [[M[0, 0], M[0, 1] + k * M[0, 2]], [M[1, 0], M[1, 1] + k * M[1, 2]]], dtype=complex
    )


def beta_series(coords, order: int | None = None) -> tuple[EpsSeries, EpsSeries, EpsSeries]:
    """Beta functions evaluated on epsilon series.

    ``order`` defaults to one more than the coordinates carry: a fixed point
    known through ``eps**n`` makes the betas vanish through ``eps**(n+1)``,
    and the top coefficient is the one that tests the ``eps**n`` term.
    """
    if order is None:
        order = coords[0].order + 1
    g = [c.with_order(order) for c in coords]
    e = EpsSeries.eps(order)
    return tuple(poly_eval_series(BETA_LOOPS[a], g) - e * g[a] for a in range(3))


def jacobian_series(coords) -> list[list[EpsSeries]]:
    """Stability matrix entries as epsilon series at the coordinates' order."""
    order = coords[0].order
    e = EpsSeries.eps(order)
    out = []
    for a in range(3):
        row = []
        for b in range(3):
            entry = poly_eval_series(_PARTIALS[a][b], coords)
            if a == b:
                entry = entry - e
            row.append(entry)
        out.append(row)
    return out


def evaluate_matrix(Ms: list[list[EpsSeries]], eps) -> np.ndarray:
    return np.array([[complex(s.evaluate(eps)) for s in row] for row in Ms], dtype=complex)


def rg_invariant(g):
    """The conserved ratio ``k = g3 / g2``."""
    g2, g3 = g[1], g[2]
    if g2 == 0:
        raise ZeroDivisionError("g2 = 0: the invariant g3/g2 is undefined on the Heisenberg axis")
    return g3 / g2
