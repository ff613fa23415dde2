"""Acceptance checks 1-8, one test (or a few localized sub-tests) per criterion.

Each sub-check records its outcome so that the terminal summary prints a
single PASS/FAIL line per criterion.
"""
from fractions import Fraction as F

import numpy as np
import pytest

from conftest import ACCEPTANCE
from z4rg.algebra import G2, G3, EpsSeries, ExactScalar, poly_eval_series
from z4rg.beta_system import BETA_LOOPS, ETA2_POLY, ETA_POLY
from z4rg.exponents import exponents_at
from z4rg.fixed_points import known_fixed_points, numeric_fixed_points, solve_series
from z4rg.flow import CONVERGED, DIVERGED, MAX_STEPS, integrate, integrate_batch
from z4rg.stability import IR_STABLE, IR_UNSTABLE, MARGINAL, classify, line_zero_mode_exact
from z4rg.tensor_engine import derive_rg_functions

TITLES = {
    1: "beta functions from tensor contraction, exact",
    2: "eta and eta2 from tensor contraction, exact",
    3: "Heisenberg and k=0 Ising points from the series solver, exact",
    4: "reduced betas vanish through eps^2 on the lines",
    5: "exponents by substitution, exact and k-independent",
    6: "stability patterns at eps in {0.1, 0.5, 1}",
    7: "flow properties at eps = 1",
    8: "1/sqrt(1-k^2) divergence near the exceptional point",
}


_pending: list[tuple[int, str, bool]] = []


def record(n: int, part: str, ok: bool):
    ACCEPTANCE.setdefault(n, {"title": TITLES[n], "parts": {}})["parts"][part] = bool(ok)
    _pending.append((n, part, bool(ok)))


def settle():
    """Fail the current test if any part it recorded failed."""
    failed = [f"criterion {n} [{part}]" for n, part, ok in _pending if not ok]
    _pending.clear()
    assert not failed, "; ".join(failed)


def Q(text) -> ExactScalar:
    return ExactScalar(F(text))


def S(*cs):
    return EpsSeries([Q(c) if isinstance(c, str) else c for c in cs], 2)


def by_label(points):
    return {fp.label: fp for fp in points}


def poly(*terms):
    from z4rg.algebra import CouplingPoly

    return CouplingPoly({e: F(c) for e, c in terms})


# frozen tables typed in from the published polynomials
BETA1 = poly(((2, 0, 0), "5/3"), ((1, 1, 0), "1"), ((0, 0, 2), "-3/16"), ((3, 0, 0), "-5/3"),
             ((2, 1, 0), "-11/6"), ((1, 2, 0), "-5/12"), ((1, 0, 2), "23/48"), ((0, 1, 2), "3/8"))
BETA2 = poly(((0, 2, 0), "3/2"), ((1, 1, 0), "2"), ((0, 3, 0), "-17/12"), ((2, 1, 0), "-23/9"),
             ((1, 2, 0), "-23/6"), ((0, 1, 2), "-1/48"))
BETA3 = poly(((0, 1, 1), "3/2"), ((1, 0, 1), "2"), ((0, 0, 3), "-1/48"), ((2, 0, 1), "-23/9"),
             ((0, 2, 1), "-17/12"), ((1, 1, 1), "-23/6"))
BRACKET = poly(((2, 0, 0), "4/3"), ((0, 2, 0), "1"), ((1, 1, 0), "2"), ((0, 0, 2), "-1/4"))
ETA = BRACKET * Q("1/24")
ETA2 = poly(((1, 0, 0), "4/3"), ((0, 1, 0), "1")) * Q("-1/2") + BRACKET * Q("5/24")


@pytest.fixture(scope="module")
def derived():
    return derive_rg_functions()


# --- 1 ---------------------------------------------------------------------

def test_c1_beta_derivation(derived):
    record(1, "beta1", derived["beta1"] == BETA1)
    record(1, "beta2", derived["beta2"] == BETA2)
    record(1, "beta3", derived["beta3"] == BETA3)
    settle()


# --- 2 ---------------------------------------------------------------------

def test_c2_eta_derivation(derived):
    record(2, "eta", derived["eta"] == ETA)
    record(2, "eta2", derived["eta2"] == ETA2)
    settle()


# --- 3 ---------------------------------------------------------------------

def test_c3_fixed_point_values():
    pts = by_label(solve_series(0))
    record(3, "Heisenberg", pts["Heisenberg"].coords == (S(0, "3/5", "9/25"), S(0), S(0)))
    record(3, "Ising g2 at k=0", pts["IsingLine[principal]"].coords[1] == S(0, "2/3", "34/81"))
    settle()


# --- 4 ---------------------------------------------------------------------

def _reduced_residuals(fp):
    k = fp.k
    g1, g2 = (c.with_order(3) for c in fp.coords[:2])
    zero = EpsSeries.zero(3)
    e = EpsSeries.eps(3)
    out = []
    for a, g in ((0, g1), (1, g2)):
        p = BETA_LOOPS[a].substitute_g3(k)
        out.append(poly_eval_series(p, [g1, g2, zero]) - e * g)
    return out


def _random_ks():
    rng = np.random.default_rng(20240501)
    inner = rng.uniform(-0.99, 0.99, 20)
    outer = rng.uniform(1.01, 10, 20) * rng.choice([-1, 1], 20)
    return [float(x) for x in np.concatenate([inner, outer])]


def test_c4_line_residuals_random_k():
    worst = 0.0
    for k in _random_ks():
        for fp in known_fixed_points(k):
            if fp.is_line:
                for r in _reduced_residuals(fp):
                    worst = max(worst, max(abs(complex(c)) for c in r.coeffs))
    print(f"criterion 4: worst coefficient residual {worst:.3e}")
    record(4, "random k, both phases and branches", worst < 1e-12)
    settle()


def test_c4_line_residuals_exact():
    ok = True
    for k in (0, F(3, 5), F(5, 13)):
        for fp in known_fixed_points(k):
            if fp.is_line:
                ok &= all(r.is_zero() for r in _reduced_residuals(fp))
    record(4, "exact zero at k in {0, 3/5, 5/13}", ok)
    settle()


# --- 5 ---------------------------------------------------------------------

def test_c5_exponents_exact():
    pts = by_label(known_fixed_points(0))
    g, h = exponents_at(pts["Gaussian"]), exponents_at(pts["Heisenberg"])
    record(5, "Gaussian", g.eta == S(0) and g.nu == S("1/2"))
    record(5, "Heisenberg", h.eta == S(0, 0, "1/50") and h.nu == S("1/2", "1/10", "11/200"))
    ok = True
    for k in (0, F(3, 5), F(5, 13), F(5, 3)):
        for fp in known_fixed_points(k):
            if fp.is_line:
                x = exponents_at(fp)
                ok &= x.eta == S(0, 0, "1/54") and x.nu == S("1/2", "1/12", "7/162")
    record(5, "Ising/Cubic exact", ok)
    settle()


def test_c5_exponents_k_independent_and_real():
    eta_ref, nu_ref = S(0, 0, "1/54"), S("1/2", "1/12", "7/162")
    ok, worst_imag = True, 0.0
    for k in _random_ks():
        for fp in known_fixed_points(k):
            if fp.is_line:
                x = exponents_at(fp)
                ok &= x.eta.allclose(eta_ref, 1e-12) and x.nu.allclose(nu_ref, 1e-12)
                worst_imag = max(worst_imag, x.eta.max_imag(), x.nu.max_imag(), x.eta2.max_imag())
    print(f"criterion 5: worst imaginary coefficient {worst_imag:.3e}")
    record(5, "k-independence", ok)
    record(5, "realness", worst_imag < 1e-12)
    settle()


# --- 6 ---------------------------------------------------------------------

K_SAMPLES = [0, 0.3, -0.6, 0.8, F(3, 5), 1.5, -2.2, 3.0]
LINE_PATTERN = sorted([IR_STABLE, IR_UNSTABLE, MARGINAL])


@pytest.mark.parametrize("eps", [0.1, 0.5, 1.0])
def test_c6_gaussian(eps):
    r = classify(known_fixed_points(0)[0], eps)
    record(6, f"Gaussian eps={eps}", r.classes == [IR_UNSTABLE] * 3)
    settle()


@pytest.mark.parametrize("eps", [0.1, 0.5, 1.0])
def test_c6_heisenberg(eps):
    r = classify(known_fixed_points(0)[1], eps)
    print(f"criterion 6: Heisenberg eps={eps} eigenvalues {np.round(r.eigenvalues, 12)} -> {r.classes}")
    record(6, f"Heisenberg eps={eps}", r.classes == [IR_STABLE] * 3)
    settle()


@pytest.mark.parametrize("eps", [0.1, 0.5, 1.0])
def test_c6_lines(eps):
    ok = True
    for k in K_SAMPLES:
        for fp in known_fixed_points(k):
            if fp.is_line:
                ok &= sorted(classify(fp, eps).classes) == LINE_PATTERN
    record(6, f"line patterns eps={eps}", ok)
    pts = by_label(known_fixed_points(0))
    record(6, f"Ising stable g2 eps={eps}", classify(pts["IsingLine[principal]"], eps).direction(IR_STABLE) == "g2")
    record(6, f"Cubic stable g1 eps={eps}", classify(pts["CubicLine[principal]"], eps).direction(IR_STABLE) == "g1")
    settle()


def test_c6_exact_zero_mode():
    identity = (BETA_LOOPS[1] * G3 - BETA_LOOPS[2] * G2).is_zero()
    lines = all(line_zero_mode_exact(fp) for k in (0, F(3, 5), F(5, 3)) for fp in known_fixed_points(k) if fp.is_line)
    record(6, "beta2 g3 - beta3 g2 == 0", identity and lines)
    settle()


# --- 7 ---------------------------------------------------------------------

def _basin_starts(k, n=50, radius=0.1, seed=2024):
    rng = np.random.default_rng(seed)
    g = rng.uniform(0.0, radius, size=(n, 2))
    return np.column_stack([g[:, 0], g[:, 1], k * g[:, 1]])


def test_c7_invariant_drift():
    runs = integrate_batch(_basin_starts(0.8), 1.0, 60.0, sample_every=10**9)
    runs.append(integrate((0.01, 0.30, 0.24), 1.0, 60.0))
    worst = max(t.invariant_drift for t in runs)
    print(f"criterion 7: worst invariant drift {worst:.3e}")
    record(7, "invariant drift", worst < 1e-8)
    settle()


def test_c7_basin_heisenberg():
    runs = integrate_batch(_basin_starts(0.0), 1.0, 60.0, sample_every=10**9)
    heis = sum(t.terminal == CONVERGED and t.converged_to == "Heisenberg" for t in runs)
    other = sum(t.terminal == CONVERGED and t.converged_to != "Heisenberg" for t in runs)
    diverged = sum(t.terminal == DIVERGED for t in runs)
    roots = {fp.label: x for fp, x in numeric_fixed_points(0, 1.0)}
    print(f"criterion 7: basin at k=0 -> Heisenberg {heis}, other {other}, diverged {diverged} of 50; "
          f"numeric Heisenberg root {roots['Heisenberg'][0]:.6g}")
    record(7, "no start ends at another fixed point", other == 0)
    record(7, ">= 45 of 50 reach Heisenberg", heis >= 45)
    settle()


def test_c7_step_halving():
    starts = _basin_starts(0.0)
    t_common = 2.5  # every start is still bounded here at eps = 1
    a = integrate_batch(starts, 1.0, t_common, step=1e-3, sample_every=10**9)
    b = integrate_batch(starts, 1.0, t_common, step=5e-4, sample_every=10**9)
    bounded = all(x.terminal == MAX_STEPS for x in a + b)
    worst = max(np.max(np.abs(x.final - y.final)) for x, y in zip(a, b))
    print(f"criterion 7: step halving change {worst:.3e} at t = {t_common}")
    record(7, "step halving", bounded and worst < 1e-8)
    settle()


# --- 8 ---------------------------------------------------------------------

def test_c8_exceptional_scaling():
    vals = []
    for k in np.linspace(0.99, 0.999, 19):
        p = by_label(known_fixed_points(float(k)))
        d = p["IsingLine[principal]"].evaluate(1.0) - p["CubicLine[principal]"].evaluate(1.0)
        vals.append(np.linalg.norm(d) * np.sqrt(abs(1 - k * k)))
    spread = (max(vals) - min(vals)) / np.mean(vals)
    print(f"criterion 8: relative spread {spread:.3e}")
    record(8, "spread < 1%", spread < 0.01)
    settle()


