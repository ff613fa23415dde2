from fractions import Fraction as F

import numpy as np
import pytest

from z4rg.algebra import EpsSeries, ExactScalar
from z4rg.beta_system import beta_full
from z4rg.errors import DegenerateRootError, ExceptionalPointError
from z4rg.fixed_points import (
    FixedKind,
    fixed_point_residual,
    known_fixed_points,
    line_factor,
    numeric_fixed_points,
    refine_numeric,
    solve_series,
    track_fixed_point,
)


def S(*cs):
    return EpsSeries([ExactScalar(F(c)) if isinstance(c, str) else c for c in cs], 2)


def by_label(points):
    return {fp.label: fp for fp in points}


def test_k0_closed_forms():
    p = by_label(known_fixed_points(0))
    assert p["Heisenberg"].coords == (S(0, "3/5", "9/25"), S(0), S(0))
    assert p["IsingLine[principal]"].coords == (S(0), S(0, "2/3", "34/81"), S(0))
    assert p["CubicLine[principal]"].coords == (S(0, 1, "17/27"), S(0, "-2/3", "-34/81"), S(0))


def test_k_three_fifths_is_rational():
    p = by_label(known_fixed_points(F(3, 5)))
    assert p["IsingLine[principal]"].coords == (
        S(0, "-1/8", "-17/216"),
        S(0, "5/6", "85/162"),
        S(0, "1/2", "17/54"),
    )


def test_broken_phase_branch():
    p = by_label(known_fixed_points(F(5, 3)))
    assert p["IsingLine[principal]"].coords[1][1] == ExactScalar(0, F(-1, 2))
    assert p["IsingLine[conjugate]"].coords[1][1] == ExactScalar(0, F(1, 2))
    assert line_factor(F(5, 3)) == ExactScalar(0, F(-3, 4))


def test_exceptional_point():
    for k in (1, -1, F(1), 1.0):
        with pytest.raises(ExceptionalPointError):
            known_fixed_points(k)
    with pytest.raises(DegenerateRootError):
        solve_series(1)


@pytest.mark.parametrize("k", [0, F(3, 5), F(5, 13), F(5, 3), F(-13, 5)])
def test_solver_matches_closed_forms_exactly(k):
    solved = by_label(solve_series(k))
    known = by_label(fp for fp in known_fixed_points(k) if fp.branch == "principal")
    assert set(solved) == set(known)
    for label, fp in known.items():
        assert solved[label].coords == fp.coords, label


@pytest.mark.parametrize("k", [0.8, 0.3, -0.95, 2.5, 1.2 + 0.3j])
def test_solver_matches_closed_forms_numeric(k):
    solved = by_label(solve_series(k))
    known = by_label(fp for fp in known_fixed_points(k) if fp.branch == "principal")
    assert set(solved) == set(known)
    for label, fp in known.items():
        for a, b in zip(solved[label].coords, fp.coords):
            assert a.allclose(b, 1e-12), label


def test_solver_higher_order_consistent():
    s3 = by_label(solve_series(F(3, 5), order=3))
    s2 = by_label(solve_series(F(3, 5), order=2))
    for label in s2:
        assert all(a.with_order(2) == b for a, b in zip(s3[label].coords, s2[label].coords))
        assert all(r.is_zero() for r in fixed_point_residual(s3[label]))


def _random_ks(seed=11):
    rng = np.random.default_rng(seed)
    inner = rng.uniform(-0.99, 0.99, 20)
    outer = rng.uniform(1.01, 10, 20) * rng.choice([-1, 1], 20)
    return list(inner) + list(outer)


def test_residuals_random_k():
    worst = 0.0
    for k in _random_ks():
        for fp in known_fixed_points(k):
            for r in fixed_point_residual(fp):
                worst = max(worst, max(abs(complex(c)) for c in r.coeffs))
    assert worst < 1e-12


@pytest.mark.parametrize("k", [0, F(3, 5), F(5, 13), F(5, 3)])
def test_residuals_exact(k):
    for fp in known_fixed_points(k):
        assert all(r.is_zero() for r in fixed_point_residual(fp)), fp.label


def test_conjugate_branches():
    for k in (1.5, -3.0, F(5, 3)):
        p = by_label(known_fixed_points(k))
        for kind in ("IsingLine", "CubicLine"):
            a, b = p[f"{kind}[principal]"], p[f"{kind}[conjugate]"]
            for x, y in zip(a.coords, b.coords):
                assert x.conjugate().allclose(y.to_numeric(), 1e-14)


def test_divergence_near_exceptional_point():
    ks = np.linspace(0.99, 0.999, 10)
    vals = []
    for k in ks:
        p = by_label(known_fixed_points(float(k)))
        d = p["IsingLine[principal]"].evaluate(1.0) - p["CubicLine[principal]"].evaluate(1.0)
        vals.append(np.linalg.norm(d) * np.sqrt(abs(1 - k * k)))
    assert (max(vals) - min(vals)) / np.mean(vals) < 0.01


def test_refine_numeric_trivial_seed():
    assert np.allclose(refine_numeric(np.zeros(3), 1.0), 0)


def test_heisenberg_root_at_eps_one_is_complex():
    # -g + 5/3 g^2 - 5/3 g^3 has only g = 0 as a real root
    roots = np.roots([-5 / 3, 5 / 3, -1])
    assert np.all(np.abs(roots.imag) > 0.5)
    h = known_fixed_points(0)[1]
    x = track_fixed_point(h, 1.0)
    assert np.max(np.abs(np.array(beta_full(x, 1.0)))) < 1e-12
    assert np.min(np.abs(roots - x[0])) < 1e-12
    assert abs(x[0] - (0.5 + 0.5916079783099616j)) < 1e-12
    assert np.allclose(track_fixed_point(h, 1.0, detour=-0.25), x.conj())


def test_refine_from_series_seed_meets_residual():
    ising = by_label(known_fixed_points(0.8))["IsingLine[principal]"]
    x = refine_numeric(ising.evaluate(0.5), 0.5)
    assert np.linalg.norm(beta_full(x, 0.5)) < 1e-12
    tracked = track_fixed_point(ising, 0.5)
    assert np.linalg.norm(beta_full(tracked, 0.5)) < 1e-12
    assert tracked[2] / tracked[1] == pytest.approx(0.8, abs=1e-12)


@pytest.mark.parametrize("k", [0, 0.8, 1.5, 3.0])
@pytest.mark.parametrize("eps", [0.1, 0.5, 1.0])
def test_tracked_roots_are_roots(k, eps):
    found = numeric_fixed_points(k, eps)
    assert {fp.kind for fp, _ in found} >= {FixedKind.GAUSSIAN, FixedKind.HEISENBERG}
    for fp, x in found:
        assert np.linalg.norm(beta_full(x, eps)) < 1e-12, fp.label


def test_small_eps_tracking_stays_near_series():
    for fp, x in numeric_fixed_points(F(3, 5), 0.02):
        assert np.linalg.norm(x - fp.evaluate(0.02)) < 1e-4
