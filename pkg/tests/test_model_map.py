import math
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from z4rg.model_map import (
    BROKEN,
    EXCEPTIONAL,
    UNBROKEN,
    ModelCouplings,
    hermitian_equivalent_coupling,
    nd_constant,
    physical_to_tensor,
    pt_phase,
    tensor_to_physical,
    to_tilde,
)

fr = st.fractions(-10, 10, max_denominator=100)
pos = st.fractions(F(1, 100), 10, max_denominator=100)


def test_map_examples():
    assert physical_to_tensor(ModelCouplings(1, 0, 0)) == (3, 0, 0)
    assert physical_to_tensor(ModelCouplings(F(1, 4), F(1, 24), F(1, 24))) == (0, 1, 1)


@given(pos, fr, fr)
def test_round_trip_exact(u, v, w):
    mc = ModelCouplings(u, v, w)
    back = tensor_to_physical(*physical_to_tensor(mc))
    assert (back.u, back.v, back.w) == (u, v, w)


@given(pos, fr, fr)
def test_phase_agrees_with_tensor_sign(u, v, w):
    g1, g2, g3 = physical_to_tensor(ModelCouplings(u, v, w))
    d = g2 * g2 - g3 * g3
    expect = UNBROKEN if d > 0 else BROKEN if d < 0 else EXCEPTIONAL
    assert pt_phase(v, w) == expect
    if v != 0:
        assert (abs(ModelCouplings(u, v, w).k) < 1) == (expect == UNBROKEN)


def test_u_must_be_positive():
    with pytest.raises(ValueError):
        ModelCouplings(0, 1, 1)


def test_phase_examples():
    assert pt_phase(1, 0.5, 1e-12) == UNBROKEN
    assert pt_phase(0.5, 1, 1e-12) == BROKEN
    assert pt_phase(1, 1, 1e-12) == EXCEPTIONAL
    with pytest.raises(ValueError):
        pt_phase(1, 1, -1)


def test_hermitian_equivalent():
    assert hermitian_equivalent_coupling(5, 3) == 4
    assert hermitian_equivalent_coupling(3, 5) == 4j
    assert hermitian_equivalent_coupling(1, 1) == 0


def test_nd_constant():
    assert nd_constant(4) == pytest.approx(1 / (8 * math.pi**2), rel=1e-15)
    assert nd_constant(4) == pytest.approx(0.0126651, rel=1e-5)
    assert nd_constant(2) == pytest.approx(1 / (2 * math.pi), rel=1e-15)
    # half-integer check: Gamma(3/2) = sqrt(pi)/2
    assert nd_constant(3) == pytest.approx(2 / ((4 * math.pi) ** 1.5 * math.sqrt(math.pi) / 2), rel=1e-15)
    assert to_tilde(8 * math.pi**2) == pytest.approx(1.0, rel=1e-15)
    with pytest.raises(ValueError):
        nd_constant(0)
