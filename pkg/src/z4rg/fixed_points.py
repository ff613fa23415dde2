"""Fixed points and fixed lines of the two-loop flow.

Three independent routes are provided:

* :func:`known_fixed_points` -- the closed-form epsilon series.
* :func:`solve_series` -- an order-by-order solver for the reduced system on
  the plane ``g3 = k g2``; it never looks at the closed forms.
* :func:`refine_numeric` -- damped Newton on the truncated betas at a
  concrete epsilon.

Lines are parametrised by the RG invariant ``k = g3/g2``.  For ``k**2 > 1``
the factor ``1/sqrt(1-k**2)`` is imaginary; the principal branch uses
``sqrt(1-k**2) = +i sqrt(k**2-1)`` and the conjugate partner is reported as
well.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction as Fr
from numbers import Complex

import numpy as np

from .algebra import EpsSeries, ExactScalar, principal_sqrt, to_exact
from .beta_system import (
    BETA_LOOPS,
    X_POLY,
    beta_full,
    beta_reduced,
    beta_series,
    jacobian,
    jacobian_reduced,
)
from .errors import ConvergenceError, DegenerateRootError, ExceptionalPointError

__all__ = [
    "FixedKind",
    "FixedPoint",
    "coerce_k",
    "line_factor",
    "known_fixed_points",
    "solve_series",
    "refine_numeric",
    "track_fixed_point",
    "numeric_fixed_points",
    "fixed_point_residual",
]

EXCEPTIONAL_TOL = 1e-14


class FixedKind(str, enum.Enum):
    GAUSSIAN = "Gaussian"
    HEISENBERG = "Heisenberg"
    ISING = "IsingLine"
    CUBIC = "CubicLine"
    OTHER = "NumericOther"


@dataclass(frozen=True)
class FixedPoint:
    kind: FixedKind
    k: object
    coords: tuple[EpsSeries, EpsSeries, EpsSeries]
    branch: str = "principal"

    @property
    def label(self) -> str:
        if self.kind in (FixedKind.ISING, FixedKind.CUBIC):
            return f"{self.kind.value}[{self.branch}]"
        return self.kind.value

    @property
    def order(self) -> int:
        return self.coords[0].order

    @property
    def is_line(self) -> bool:
        return self.kind in (FixedKind.ISING, FixedKind.CUBIC)

    def evaluate(self, eps) -> np.ndarray:
        return np.array([complex(c.evaluate(eps)) for c in self.coords], dtype=complex)

    def is_real(self, tol: float = 1e-12) -> bool:
        return all(c.max_imag() <= tol for c in self.coords)

    def conjugate(self) -> "FixedPoint":
        return FixedPoint(self.kind, self.k, tuple(c.conjugate() for c in self.coords), self.branch)


def coerce_k(k):
    """Exact scalar for int/Fraction/str input, ``complex`` for floats."""
    if isinstance(k, str):
        return ExactScalar(Fr(k))
    e = to_exact(k)
    if e is not None:
        return e
    if isinstance(k, Complex):
        return complex(k)
    raise TypeError(f"cannot interpret k = {k!r}")


def _is_real_k(k) -> bool:
    return k.is_real if isinstance(k, ExactScalar) else complex(k).imag == 0


def _check_exceptional(k) -> object:
    one_minus = 1 - k * k
    if isinstance(one_minus, ExactScalar):
        if one_minus == 0:
            raise ExceptionalPointError("exceptional point k = +-1: fixed lines diverge")
    elif abs(one_minus) < EXCEPTIONAL_TOL:
        raise ExceptionalPointError("exceptional point k = +-1: fixed lines diverge")
    return one_minus


def line_factor(k, branch_sign: int = 1):
    """``1/sqrt(1 - k**2)`` on the chosen branch.

    ``branch_sign`` flips the square root only where it is not a positive
    real number, i.e. in the PT-broken region.
    """
    k = coerce_k(k)
    one_minus = _check_exceptional(k)
    root = principal_sqrt(one_minus)
    positive_real = _is_real_k(k) and complex(one_minus).real > 0
    if branch_sign < 0 and not positive_real:
        root = -root
    return 1 / root


def _has_partner(k) -> bool:
    return _is_real_k(k) and complex(k).real ** 2 > 1


def known_fixed_points(k, order: int = 2, branch_sign: int = 1) -> list[FixedPoint]:
    """Gaussian, Heisenberg and the Ising/Cubic line points at parameter ``k``.

    For real ``k`` with ``k**2 > 1`` the conjugate-branch Ising and Cubic
    points are appended after the principal ones.
    """
    if not 0 <= order <= 2:
        raise ValueError("closed forms are known through order 2")
    k = coerce_k(k)
    e = EpsSeries.eps(2)
    e2 = e * e
    zero = EpsSeries.zero(2)
    heis = e * Fr(3, 5) + e2 * Fr(9, 25)
    a = e * Fr(1, 2) + e2 * Fr(17, 54)
    c = e * Fr(2, 3) + e2 * Fr(34, 81)

    def cut(*cs):
        return tuple(x.with_order(order) for x in cs)

    out = [
        FixedPoint(FixedKind.GAUSSIAN, k, cut(zero, zero, zero)),
        FixedPoint(FixedKind.HEISENBERG, k, cut(heis, zero, zero)),
    ]
    branches = [("principal", branch_sign)]
    if _has_partner(k):
        branches.append(("conjugate", -branch_sign))
    for name, sign in branches:
        s = line_factor(k, sign)
        out.append(FixedPoint(FixedKind.ISING, k, cut(a * (1 - s), c * s, c * s * k), name))
        out.append(FixedPoint(FixedKind.CUBIC, k, cut(a * (1 + s), -c * s, -c * s * k), name))
    return out


def fixed_point_residual(fp: FixedPoint) -> tuple[EpsSeries, EpsSeries, EpsSeries]:
    """Betas on the fixed-point series, one order past the coordinates."""
    return beta_series(fp.coords)


# ----------------------------------------------------------------------------
# order-by-order solver
# ----------------------------------------------------------------------------

def _solve2(J, r):
    """Solve the 2x2 system ``J x = r`` by Cramer's rule (exact or complex)."""
    det = J[0][0] * J[1][1] - J[0][1] * J[1][0]
    if det == 0 or (isinstance(det, complex) and abs(det) < 1e-14):
        raise DegenerateRootError("leading-order Jacobian is singular")
    return (
        (r[0] * J[1][1] - J[0][1] * r[1]) / det,
        (J[0][0] * r[1] - r[0] * J[1][0]) / det,
    )


def _leading_roots(k):
    """All roots ``a`` of the leading-order reduced system."""
    p1 = BETA_LOOPS[0].substitute_g3(k).homogeneous(2)
    xl = X_POLY.substitute_g3(k).homogeneous(1)
    q20, q11, q02 = p1.coeff((2, 0, 0)), p1.coeff((1, 1, 0)), p1.coeff((0, 2, 0))
    x1, x2 = xl.coeff((1, 0, 0)), xl.coeff((0, 1, 0))
    zero = ExactScalar(0)
    roots = [(zero, zero)]
    if q20 != 0:
        roots.append((1 / q20, zero))
    if x1 == 0:
        raise DegenerateRootError("X has no g1 dependence at leading order")
    # branch X = 1 with a2 != 0: a1 = alpha + beta * a2
    alpha, beta = 1 / x1, -x2 / x1
    A = q20 * beta * beta + q11 * beta + q02
    B = -beta + 2 * q20 * alpha * beta + q11 * alpha
    C = -alpha + q20 * alpha * alpha
    if A == 0 or (isinstance(A, complex) and abs(A) < EXCEPTIONAL_TOL):
        raise DegenerateRootError(
            "Ising and Cubic roots degenerate at infinity (exceptional point k = +-1)"
        )
    disc = principal_sqrt(B * B - 4 * A * C)
    for sgn in (1, -1):
        a2 = (-B + sgn * disc) / (2 * A)
        if a2 == 0:
            continue
        roots.append((alpha + beta * a2, a2))
    return roots


def _leading_jacobian(a, k):
    p1 = BETA_LOOPS[0].substitute_g3(k).homogeneous(2)
    xl = X_POLY.substitute_g3(k).homogeneous(1)
    a1, a2 = a
    dq1 = p1.partial(1)(a1, a2, 0)
    dq2 = p1.partial(2)(a1, a2, 0)
    x1, x2 = xl.coeff((1, 0, 0)), xl.coeff((0, 1, 0))
    xval = xl(a1, a2, 0)
    return [[dq1 - 1, dq2], [a2 * x1, xval - 1 + a2 * x2]]


def _label(a, k) -> FixedKind:
    a1, a2 = a
    if a1 == 0 and a2 == 0:
        return FixedKind.GAUSSIAN
    if a2 == 0:
        return FixedKind.HEISENBERG
    root = principal_sqrt(1 - k * k)
    return FixedKind.ISING if complex(a2 * root).real > 0 else FixedKind.CUBIC


def solve_series(k, order: int = 2) -> list[FixedPoint]:
    """Solve the reduced betas for ``g* = a eps + b eps**2 + ...``.

    The leading coefficients solve a quadratic system (four roots); each
    higher coefficient solves a linear system with the leading-order
    Jacobian.  Returns Gaussian, Heisenberg, Ising and Cubic in that order.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    k = coerce_k(k)
    roots = _leading_roots(k)  # raises DegenerateRootError at k = +-1
    out = []
    for a in roots:
        J0 = _leading_jacobian(a, k)
        g1 = EpsSeries([0, a[0]], order)
        g2 = EpsSeries([0, a[1]], order)
        for m in range(2, order + 1):
            b1, b2, _ = beta_series((g1, g2, g2 * k), order=m + 1)
            c1, c2 = _solve2(J0, (-b1[m + 1], -b2[m + 1]))
            g1 = EpsSeries(list(g1.coeffs[:m]) + [c1], order)
            g2 = EpsSeries(list(g2.coeffs[:m]) + [c2], order)
        out.append(FixedPoint(_label(a, k), k, (g1, g2, g2 * k)))
    rank = {FixedKind.GAUSSIAN: 0, FixedKind.HEISENBERG: 1, FixedKind.ISING: 2, FixedKind.CUBIC: 3}
    return sorted(out, key=lambda fp: rank[fp.kind])


# ----------------------------------------------------------------------------
# Newton refinement at finite epsilon
# ----------------------------------------------------------------------------

def _newton(F, J, x, tol, max_iter):
    fx = F(x)
    r = np.linalg.norm(fx)
    for _ in range(max_iter):
        if r < tol:
            return x
        Jx = J(x)
        try:
            dx = np.linalg.solve(Jx, -fx)
        except np.linalg.LinAlgError:
            raise ConvergenceError("Jacobian singular during Newton iteration") from None
        lam = 1.0
        while True:
            xn = x + lam * dx
            fn = F(xn)
            rn = np.linalg.norm(fn)
            if rn <= r or lam < 1e-6:
                break
            lam *= 0.5
        x, fx, r = xn, fn, rn
        if not np.isfinite(r):
            break
    if r < tol:
        return x
    raise ConvergenceError(f"no convergence after {max_iter} iterations (|beta| = {r:.3e})")


def refine_numeric(seed, eps, tol: float = 1e-12, max_iter: int = 200) -> np.ndarray:
    """Root of the truncated betas near ``seed`` at a concrete ``eps``.

    Damped Newton (step halved while the residual grows).  On a fixed line
    the full 3x3 Jacobian has an exact zero mode, so Newton runs on the
    reduced system at ``k = g3/g2`` and the result is lifted back via
    ``g3 = k g2``.  A real seed keeps the iteration on the real axis; use
    :func:`track_fixed_point` to reach roots that have gone complex.
    """
    return _refine(np.asarray(seed, dtype=complex), eps, tol, max_iter)


def track_fixed_point(
    fp: FixedPoint,
    eps,
    steps: int = 64,
    detour: float = 0.25,
    start: float = 0.02,
    tol: float = 1e-12,
) -> np.ndarray:
    """Follow the root that ``fp`` describes at small eps out to ``eps``.

    Newton continuation along ``eps(t) = eps * (t + i*detour*t*(1-t))`` for
    ``t`` from ``start`` to 1.  The complex detour steps around the square-root
    branch points where real roots collide and turn complex (for the
    Heisenberg point at ``eps = 5/12``).  The sign of ``detour`` picks which
    member of a conjugate pair is reached.
    """
    ts = np.linspace(start, 1.0, steps + 1)
    x = None
    for t in ts:
        e_t = eps * (t + 1j * detour * t * (1 - t))
        seed = fp.evaluate(e_t) if x is None else x
        x = _refine(np.asarray(seed, dtype=complex), e_t, tol, 200)
    return x


def _refine(seed: np.ndarray, eps, tol, max_iter) -> np.ndarray:
    if abs(seed[1]) > 1e-14:
        k = seed[2] / seed[1]

        def F(x):
            return np.array(beta_reduced(x[0], x[1], k, eps), dtype=complex)

        def J(x):
            return jacobian_reduced(x[0], x[1], k, eps)

        # g3 = k g2 scales the second residual by up to |k| in the full system
        x = _newton(F, J, seed[:2].copy(), tol / (1.0 + abs(k)), max_iter)
        out = np.array([x[0], x[1], k * x[1]], dtype=complex)
    else:

        def F(x):
            return np.array(beta_full(x, eps), dtype=complex)

        def J(x):
            return jacobian(x, eps)

        out = _newton(F, J, seed.copy(), tol, max_iter)
    if np.linalg.norm(np.array(beta_full(out, eps))) >= tol:
        raise ConvergenceError("lifted point misses the full beta tolerance")
    return out


def numeric_fixed_points(k, eps, tol: float = 1e-12) -> list[tuple[FixedPoint, np.ndarray]]:
    """Track every principal series fixed point out to ``eps``; skip failures."""
    out = []
    for fp in known_fixed_points(k):
        if fp.branch != "principal":
            continue
        try:
            out.append((fp, track_fixed_point(fp, eps, tol=tol)))
        except ConvergenceError:
            continue
    return out

