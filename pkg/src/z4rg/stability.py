"""Linear stability of fixed points.

Convention: the flow runs toward the infrared as ``dg/dt = -beta(g)``, so a
direction is IR-stable when the matching eigenvalue of ``d beta / d g`` has
positive real part.

On the fixed lines ``beta2 = g2 X`` and ``beta3 = g3 X``; the row
combination ``row3 - k row2`` of the stability matrix equals
``X (e3 - k e2)``, so ``X`` itself is an eigenvalue.  It vanishes through
two loops on the line, giving an exact zero mode along the line tangent.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .algebra import EpsSeries
from .beta_system import evaluate_matrix, jacobian_series
from .fixed_points import FixedPoint

__all__ = [
    "IR_STABLE",
    "IR_UNSTABLE",
    "MARGINAL",
    "StabilityReport",
    "eigen3",
    "eigenvector",
    "classify_value",
    "classify",
    "eigen_series",
    "classify_series",
    "line_zero_mode_exact",
]

IR_STABLE = "ir_stable"
IR_UNSTABLE = "ir_unstable"
MARGINAL = "marginal"
AXES = ("g1", "g2", "g3")

_OMEGA = (1.0, complex(-0.5, 3**0.5 / 2), complex(-0.5, -(3**0.5) / 2))


def _char_poly(M: np.ndarray):
    """Coefficients of ``det(lambda I - M) = l^3 + b l^2 + c l + d``."""
    tr = np.trace(M)
    minors = (
        M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
        + M[0, 0] * M[2, 2] - M[0, 2] * M[2, 0]
        + M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1]
    )
    det = np.linalg.det(M)
    return -tr, minors, -det


def eigen3(M) -> list[complex]:
    """Eigenvalues of a 3x3 matrix from the closed-form cubic.

    Cardano's formula on the depressed cubic, followed by a Newton polish of
    each root on the characteristic polynomial.
    """
    M = np.asarray(M, dtype=complex)
    if M.shape != (3, 3) or not np.all(np.isfinite(M)):
        raise ValueError("eigen3 expects a finite 3x3 matrix")
    b, c, d = (complex(x) for x in _char_poly(M))
    shift = -b / 3
    p = c - b * b / 3
    q = 2 * b**3 / 27 - b * c / 3 + d
    disc = cmath.sqrt((q / 2) ** 2 + (p / 3) ** 3)
    # the larger of the two candidates avoids cancellation
    w = -q / 2 + disc
    if abs(-q / 2 - disc) > abs(w):
        w = -q / 2 - disc
    scale = max(abs(b), abs(c) ** 0.5, abs(d) ** (1 / 3), 1e-300)
    if w == 0 or (abs(p) <= 1e-12 * scale**2 and abs(q) <= 1e-12 * scale**3):
        return [shift] * 3  # triple root
    else:
        u = w ** (1 / 3)
        roots = []
        for om in _OMEGA:
            uk = u * om
            roots.append(uk - p / (3 * uk) + shift)

    def f(x):
        return ((x + b) * x + c) * x + d

    def df(x):
        return (3 * x + 2 * b) * x + c

    out = []
    for r in roots:
        for _ in range(3):
            slope = df(r)
            if slope == 0:
                break
            cand = r - f(r) / slope
            if abs(f(cand)) >= abs(f(r)):
                break
            r = cand
        out.append(r)

    # a double root splits into a symmetric pair of radius ~sqrt of the
    # rounding error; the pair's midpoint is accurate to the rounding error
    for i, j in ((0, 1), (0, 2), (1, 2)):
        if abs(out[i] - out[j]) > 1e-4 * scale:
            continue
        mid = (out[i] + out[j]) / 2
        m = abs(mid)
        noise = 1e-15 * (m**3 + abs(b) * m * m + abs(c) * m + abs(d))
        if abs(f(mid)) <= max(min(abs(f(out[i])), abs(f(out[j]))), noise):
            out[i] = out[j] = mid
    return out


def eigenvector(M, lam) -> np.ndarray:
    """Unit right null vector of ``M - lam I`` (smallest singular direction)."""
    A = np.asarray(M, dtype=complex) - lam * np.eye(3)
    _, _, vh = np.linalg.svd(A)
    v = vh[-1].conj()
    # fix the phase: largest component real and positive
    j = int(np.argmax(np.abs(v)))
    return v * (abs(v[j]) / v[j])


def _eigenvectors(M, lams, cluster_tol: float = 1e-5) -> list[np.ndarray]:
    """One vector per eigenvalue; repeated eigenvalues share an orthonormal null basis."""
    out: list[np.ndarray] = []
    i = 0
    while i < len(lams):
        j = i + 1
        while j < len(lams) and abs(lams[j] - lams[i]) < cluster_tol * max(1.0, abs(lams[i])):
            j += 1
        if j - i == 1:
            out.append(eigenvector(M, lams[i]))
        else:
            lam = sum(lams[i:j]) / (j - i)
            _, _, vh = np.linalg.svd(np.asarray(M, dtype=complex) - lam * np.eye(3))
            for v in vh[-(j - i):]:
                v = v.conj()
                m = int(np.argmax(np.abs(v)))
                out.append(v * (abs(v[m]) / v[m]))
        i = j
    return out


def classify_value(lam, marginal_tol: float) -> str:
    re = complex(lam).real
    if re > marginal_tol:
        return IR_STABLE
    if re < -marginal_tol:
        return IR_UNSTABLE
    return MARGINAL


@dataclass
class StabilityReport:
    label: str
    eps: complex
    eigenvalues: list[complex]
    classes: list[str]
    marginal_tol: float
    eigenvectors: list[np.ndarray] = field(default_factory=list)
    axis_alignment: list[str] = field(default_factory=list)
    exact_zero_mode: bool | None = None

    @property
    def pattern(self) -> tuple[str, ...]:
        """Sorted multiset of classes (order-free comparison)."""
        return tuple(sorted(self.classes))

    def count(self, cls: str) -> int:
        return self.classes.count(cls)

    def direction(self, cls: str) -> str | None:
        """Dominant axis of the first eigenvector in class ``cls``."""
        for c, ax in zip(self.classes, self.axis_alignment):
            if c == cls:
                return ax
        return None


def line_zero_mode_exact(fp: FixedPoint) -> bool | None:
    """Whether ``row3 - k row2`` of the series Jacobian vanishes identically.

    Exact for exact ``k``; numeric points use a 1e-12 coefficient tolerance.
    Returns ``None`` off the lines.
    """
    if not fp.is_line:
        return None
    Ms = jacobian_series(fp.coords)
    tol = 0.0 if all(c.kind == "exact" for c in fp.coords) else 1e-12
    return all((Ms[2][b] - Ms[1][b] * fp.k).is_zero(tol) for b in range(3))


def _dominant_axis(v: np.ndarray, rel_tol: float = 1e-9) -> str:
    """Largest component; exact ties go to the lowest axis."""
    a = np.abs(v)
    return AXES[int(np.flatnonzero(a >= a.max() * (1 - rel_tol))[0])]


def _sort_key(lam: complex):
    return (-round(lam.real, 12), round(lam.imag, 12))


def classify(fp: FixedPoint, eps, marginal_tol: float = 1e-9) -> StabilityReport:
    """Classify the directions at ``fp`` for a concrete ``eps``.

    The Jacobian is built as epsilon series on the fixed-point series,
    truncated at the point's order, and then evaluated at ``eps``.  The
    truncation keeps the line zero mode exact.
    """
    if marginal_tol <= 0:
        raise ValueError("marginal_tol must be positive")
    M = evaluate_matrix(jacobian_series(fp.coords), eps)
    lams = sorted(eigen3(M), key=_sort_key)
    vecs = _eigenvectors(M, lams)
    return StabilityReport(
        label=fp.label,
        eps=complex(eps),
        eigenvalues=lams,
        classes=[classify_value(lam, marginal_tol) for lam in lams],
        marginal_tol=marginal_tol,
        eigenvectors=vecs,
        axis_alignment=[_dominant_axis(v) for v in vecs],
        exact_zero_mode=line_zero_mode_exact(fp),
    )


# ----------------------------------------------------------------------------
# eigenvalues as epsilon series
# ----------------------------------------------------------------------------

def _null_basis(A: np.ndarray, dim: int) -> np.ndarray:
    _, _, vh = np.linalg.svd(A)
    return vh[-dim:].conj().T


def eigen_series(Ms: list[list[EpsSeries]], cluster_tol: float = 1e-9) -> list[EpsSeries]:
    """Eigenvalues of ``M(eps) = eps A1 + eps^2 A2`` as order-2 series.

    First-order perturbation theory; degenerate leading eigenvalues are
    split by diagonalizing ``A2`` restricted to the shared eigenspace.
    """
    order = Ms[0][0].order
    if order != 2:
        raise ValueError("eigen_series handles order-2 matrices only")
    A = [np.array([[complex(Ms[a][b][m]) for b in range(3)] for a in range(3)]) for m in range(3)]
    if np.max(np.abs(A[0])) > 1e-12:
        raise ValueError("Jacobian must vanish at eps = 0")
    A1, A2 = A[1], A[2]
    mu0 = sorted(eigen3(A1), key=_sort_key)
    clusters: list[list[complex]] = []
    for m in mu0:
        for cl in clusters:
            if abs(cl[0] - m) < cluster_tol:
                cl.append(m)
                break
        else:
            clusters.append([m])
    out = []
    for cl in clusters:
        lam0 = sum(cl) / len(cl)
        dim = len(cl)
        V = _null_basis(A1 - lam0 * np.eye(3), dim)
        U = _null_basis((A1 - lam0 * np.eye(3)).T, dim)
        G = U.T @ V
        if abs(np.linalg.det(G)) < 1e-10:
            raise ArithmeticError("defective leading-order eigenvalue: series in eps**(1/2)")
        R = np.linalg.solve(G, U.T @ A2 @ V)
        mu1 = np.linalg.eigvals(R) if dim > 1 else [R[0, 0]]
        for m1 in sorted(mu1, key=_sort_key):
            out.append(EpsSeries([0, lam0, m1]))
    return out


def classify_series(fp: FixedPoint, tol: float = 1e-12) -> tuple[list[EpsSeries], list[str]]:
    """Small-eps classification from the sign of each eigenvalue's leading term.

    Eigenvalue series with every coefficient below ``tol`` are marginal.
    """
    lams = eigen_series(jacobian_series(fp.coords))
    classes = []
    for s in lams:
        lead = s.leading(tol)
        classes.append(MARGINAL if lead is None else classify_value(lead[1], 0.0))
    return lams, classes
