"""RG trajectories and flow vector fields.

Convention: ``dg/dt = -beta(g)`` with ``t`` increasing toward the infrared,
so attracting directions are exactly the IR-stable ones of
:mod:`z4rg.stability`.

The integrator is classical fixed-step RK4.  Trajectories are advanced as
columns of one array, so a batch of starting points costs about the same
number of Python-level operations as a single run and the output order is
simply the input order.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .beta_system import beta_full, beta_reduced
from .fixed_points import FixedPoint, known_fixed_points, numeric_fixed_points

__all__ = [
    "CONVERGED",
    "DIVERGED",
    "MAX_STEPS",
    "FlowTrajectory",
    "FieldPoint",
    "VectorField",
    "integrate",
    "integrate_batch",
    "vector_field",
]

CONVERGED = "converged"
DIVERGED = "diverged"
MAX_STEPS = "max_steps"

BETA_TOL = 1e-10
BLOWUP = 1e6
G2_FLOOR = 1e-6
MATCH_TOL = 1e-6


@dataclass
class FlowTrajectory:
    eps: complex
    k0: complex | None
    t: np.ndarray
    g: np.ndarray  # shape (n_samples, 3), complex
    terminal: str
    converged_to: str | None = None
    invariant_drift: float = 0.0
    steps: int = 0

    @property
    def final(self) -> np.ndarray:
        return self.g[-1]

    def rows(self):
        """``(t, g1, g2, g3)`` per sample."""
        for t, g in zip(self.t, self.g):
            yield float(t), complex(g[0]), complex(g[1]), complex(g[2])


def _field(state, eps):
    b = beta_full(state, eps)
    return np.stack([-b[0], -b[1], -b[2]])


def _rk4(state, eps, h, k1):
    k2 = _field(state + 0.5 * h * k1, eps)
    k3 = _field(state + 0.5 * h * k2, eps)
    k4 = _field(state + h * k3, eps)
    return state + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


_candidate_cache: dict = {}


def _candidates(k, eps) -> list[tuple[str, np.ndarray]]:
    key = (complex(k), complex(eps))
    if key not in _candidate_cache:
        _candidate_cache[key] = [(fp.label, x) for fp, x in numeric_fixed_points(k, eps)]
    return _candidate_cache[key]


def _identify(g: np.ndarray, k, eps) -> str:
    for label, x in _candidates(k, eps):
        if np.linalg.norm(g - x) < MATCH_TOL:
            return label
    return "NumericOther"


def integrate_batch(
    g0s,
    eps,
    t_max: float,
    step: float = 1e-3,
    sample_every: int = 10,
    beta_tol: float = BETA_TOL,
) -> list[FlowTrajectory]:
    """Integrate many starting points at once.

    Each trajectory freezes as soon as it converges (``|beta| < beta_tol``)
    or blows up (``|g| > 1e6`` or a non-finite value); a blown-up run keeps
    its last finite state.  Samples are taken every ``sample_every`` steps
    and at the terminal step.
    """
    if step <= 0 or t_max <= 0:
        raise ValueError("step and t_max must be positive")
    if sample_every < 1:
        raise ValueError("sample_every must be >= 1")
    G = np.array(g0s, dtype=complex).reshape(-1, 3).T.copy()  # (3, N)
    n = G.shape[1]
    if not np.all(np.isfinite(G)):
        raise ValueError("starting points must be finite")

    g2_0 = G[1]
    has_k = np.abs(g2_0) > G2_FLOOR
    k0 = np.where(has_k, G[2] / np.where(has_k, g2_0, 1), 0)
    drift = np.zeros(n)

    status = np.full(n, MAX_STEPS, dtype=object)
    active = np.ones(n, dtype=bool)
    end_step = np.zeros(n, dtype=int)
    samples_t: list[list[float]] = [[0.0] for _ in range(n)]
    samples_g: list[list[np.ndarray]] = [[G[:, j].copy()] for j in range(n)]

    n_steps = int(np.ceil(t_max / step - 1e-9))
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(n_steps):
            k1 = _field(G, eps)
            done = active & (np.linalg.norm(k1, axis=0) < beta_tol)
            if done.any():
                status[done] = CONVERGED
                end_step[done] = i
                active &= ~done
            if not active.any():
                break
            new = _rk4(G, eps, step, k1)
            bad = active & (
                ~np.all(np.isfinite(new), axis=0) | (np.linalg.norm(np.nan_to_num(new, nan=np.inf), axis=0) > BLOWUP)
            )
            if bad.any():
                status[bad] = DIVERGED
                end_step[bad] = i
                active &= ~bad
            G[:, active] = new[:, active]
            t = (i + 1) * step

            watch = active & has_k & (np.abs(G[1]) > G2_FLOOR)
            if watch.any():
                d = np.abs(G[2, watch] / G[1, watch] - k0[watch])
                drift[watch] = np.maximum(drift[watch], d)

            if (i + 1) % sample_every == 0:
                for j in np.flatnonzero(active):
                    samples_t[j].append(t)
                    samples_g[j].append(G[:, j].copy())
        else:
            end_step[active] = n_steps

    out = []
    for j in range(n):
        last_t = end_step[j] * step
        if samples_t[j][-1] < last_t:
            samples_t[j].append(last_t)
            samples_g[j].append(G[:, j].copy())
        kk = complex(k0[j]) if has_k[j] else None
        conv = None
        if status[j] == CONVERGED:
            conv = _identify(G[:, j], kk if kk is not None else 0, eps)
        out.append(
            FlowTrajectory(
                eps=complex(eps),
                k0=kk,
                t=np.array(samples_t[j]),
                g=np.array(samples_g[j]),
                terminal=str(status[j]),
                converged_to=conv,
                invariant_drift=float(drift[j]),
                steps=int(end_step[j]),
            )
        )
    return out


def integrate(g0, eps, t_max: float, step: float = 1e-3, sample_every: int = 10, **kw) -> FlowTrajectory:
    """Integrate one trajectory of ``dg/dt = -beta(g)`` from ``g0``."""
    return integrate_batch([g0], eps, t_max, step=step, sample_every=sample_every, **kw)[0]


# ----------------------------------------------------------------------------
# vector fields on the planes g3 = k g2
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldPoint:
    label: str
    series_value: np.ndarray  # fixed-point series summed at eps
    numeric: np.ndarray | None  # exact zero of the truncated beta, if real


@dataclass
class VectorField:
    k: object
    eps: float
    g1: np.ndarray
    g2: np.ndarray
    U: np.ndarray  # -beta1 on the grid, shape (len(g2), len(g1))
    V: np.ndarray  # -beta2
    fixed_points: list[FieldPoint] = field(default_factory=list)
    lines_present: bool = False


def vector_field(k, g1_range, g2_range, grid=(21, 21), eps=1.0) -> VectorField:
    """Reduced flow ``(-beta1, -beta2)`` sampled on a rectangular grid.

    Attaches the real points of :func:`known_fixed_points` (with their
    numeric roots when those are real too).  ``lines_present`` is False in
    the PT-broken phase where only the Gaussian and Heisenberg points
    remain real.
    """
    nx, ny = grid
    if nx < 2 or ny < 2:
        raise ValueError("grid dimensions must be >= 2")
    g1 = np.linspace(g1_range[0], g1_range[1], nx)
    g2 = np.linspace(g2_range[0], g2_range[1], ny)
    G1, G2 = np.meshgrid(g1, g2)
    kc = complex(k)
    kk = kc.real if kc.imag == 0 else kc
    b1, b2 = beta_reduced(G1, G2, kk, eps)
    U, V = -b1, -b2

    numeric = {label: x for label, x in _candidates(k, eps)}
    points = []
    for fp in known_fixed_points(k):
        if not fp.is_real():
            continue
        x = numeric.get(fp.label)
        if x is not None and np.max(np.abs(x.imag)) > 1e-9:
            x = None
        points.append(FieldPoint(fp.label, fp.evaluate(eps), None if x is None else x.real))
    lines = any(p.label.startswith(("IsingLine", "CubicLine")) for p in points)
    return VectorField(k, eps, g1, g2, U, V, points, lines)


def real_fixed_points(k) -> list[FixedPoint]:
    return [fp for fp in known_fixed_points(k) if fp.is_real()]
