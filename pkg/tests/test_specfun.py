import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from casimir_scalar.errors import DomainError, SpecialFunctionOverflow
from casimir_scalar.specfun import (
    bessel_k,
    bessel_k_oracle,
    bessel_k_scaled,
    gamma_fn,
    zeta_fn,
)

# frozen output of bessel_k_oracle(3, 2)
K3_AT_2 = 0.6473853909486343
# frozen output of e * bessel_k_oracle(0, 1)
E_K0_AT_1 = math.e * 0.4210244382407084


def rel(a, b):
    return abs(a - b) / abs(b)


# --- bessel_k -------------------------------------------------------------


def test_k_half_closed_form():
    assert rel(bessel_k(0.5, 1.0).value, math.sqrt(math.pi / 2) * math.exp(-1)) < 1e-15


@pytest.mark.parametrize("x", [1e-6, 1e-3, 0.5, 1.9, 2.1, 7.0, 24.0, 26.0, 80.0, 699.0])
def test_k2_recurrence_identity(x):
    k2 = bessel_k(2, x).value
    assert rel(k2, bessel_k(0, x).value + 2 / x * bessel_k(1, x).value) < 1e-12


def test_k3_at_2_matches_frozen_oracle():
    assert rel(bessel_k(3, 2.0).value, K3_AT_2) < 1e-12
    assert rel(bessel_k_oracle(3, 2.0), K3_AT_2) < 1e-13


@pytest.mark.parametrize("nu", [0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.7, 7.5, 10.0])
@pytest.mark.parametrize("x", [1e-3, 0.03, 0.7, 2.0, 3.3, 11.0, 24.9, 25.1, 45.0, 60.0])
def test_k_agrees_with_oracle(nu, x):
    assert rel(bessel_k(nu, x).value, bessel_k_oracle(nu, x)) <= 1e-12


@pytest.mark.parametrize("nu", [1.0, 1.5, 2.0, 2.5, 3.0])
def test_recurrence_residual_on_log_grid(nu):
    for x in np.geomspace(1e-3, 50.0, 60):
        kp, km, k = (bessel_k(v, x).value for v in (nu + 1, nu - 1, nu))
        assert abs(kp - km - 2 * nu / x * k) / kp <= 1e-11


@pytest.mark.parametrize("x", np.geomspace(1e-3, 300, 25))
def test_half_integer_closed_forms(x):
    e = math.exp(-x) * math.sqrt(math.pi / (2 * x))
    assert rel(bessel_k(0.5, x).value, e) <= 1e-13
    assert rel(bessel_k(1.5, x).value, e * (1 + 1 / x)) <= 1e-13
    assert rel(bessel_k(2.5, x).value, e * (1 + 3 / x + 3 / x**2)) <= 1e-13


@given(st.floats(0.0, 50.0), st.floats(1e-3, 600.0), st.floats(1.0001, 1.5))
def test_k_decreasing_in_x(nu, x, factor):
    try:
        a = bessel_k_scaled(nu, x).value * math.exp(-x)
    except SpecialFunctionOverflow:
        return
    b = bessel_k_scaled(nu, min(x * factor, 700.0)).value * math.exp(-min(x * factor, 700.0))
    assert b < a or (a == 0.0 and b == 0.0)


@given(st.floats(1.0, 30.0), st.floats(1e-2, 200.0))
def test_scaled_recurrence_property(nu, x):
    kp, km, k = (bessel_k_scaled(v, x).value for v in (nu + 1, nu - 1, nu))
    assert abs(kp - km - 2 * nu / x * k) / kp <= 1e-11


def test_error_estimate_within_contract():
    for nu, x in [(0, 1.0), (50, 30.0), (12.3, 0.01)]:
        r = bessel_k(nu, x)
        assert 0 <= r.abs_error_estimate <= 1e-12 * max(1.0, abs(r.value))


@pytest.mark.parametrize("nu,x", [(0.0, 0.0), (0.0, -1.0), (-0.5, 1.0), (51.0, 1.0), (1.0, 701.0), (1.0, 1e-7)])
def test_k_domain_errors(nu, x):
    with pytest.raises(DomainError):
        bessel_k(nu, x)


def test_k_overflow_is_signalled():
    with pytest.raises(SpecialFunctionOverflow):
        bessel_k(50.0, 1e-6)


def test_k_at_upper_contract_edge_is_representable():
    x = 700.0
    assert rel(bessel_k(0.5, x).value, math.sqrt(math.pi / (2 * x)) * math.exp(-x)) < 1e-13


# --- bessel_k_scaled ------------------------------------------------------


def test_scaled_half_at_100():
    assert rel(bessel_k_scaled(0.5, 100.0).value, math.sqrt(math.pi / 200)) < 1e-15


def test_scaled_k0_at_1_frozen():
    assert rel(bessel_k_scaled(0, 1.0).value, E_K0_AT_1) < 1e-12


def test_scaled_consistent_with_unscaled():
    assert rel(bessel_k_scaled(2, 50.0).value, math.exp(50.0) * bessel_k(2, 50.0).value) < 1e-12


@pytest.mark.parametrize("x", [1e-6, 1.0, 100.0, 400.0, 700.0])
def test_scaled_finite_nonzero(x):
    v = bessel_k_scaled(3.0, x).value
    assert math.isfinite(v) and v > 0


# --- oracle ---------------------------------------------------------------


def test_oracle_half_closed_form():
    assert rel(bessel_k_oracle(0.5, 1.0), math.sqrt(math.pi / 2) * math.exp(-1)) < 1e-13


def test_oracle_large_x_leading_behaviour():
    x = 30.0
    lead = math.sqrt(math.pi / (2 * x)) * math.exp(-x) * (1 - 1 / (8 * x))
    assert rel(bessel_k_oracle(0, x), lead) < 1e-2


def test_oracle_domain():
    with pytest.raises(DomainError):
        bessel_k_oracle(11.0, 1.0)
    with pytest.raises(DomainError):
        bessel_k_oracle(1.0, 1e-4)


# --- gamma ----------------------------------------------------------------


def test_gamma_examples():
    assert gamma_fn(2).value == pytest.approx(1.0, rel=1e-15)
    assert rel(gamma_fn(1.5).value, math.sqrt(math.pi) / 2) < 1e-13
    assert rel(gamma_fn(3.5).value, 15 * math.sqrt(math.pi) / 8) < 1e-13


@given(st.floats(1e-3, 99.0))
def test_gamma_recurrence(x):
    assert rel(gamma_fn(x + 1).value, x * gamma_fn(x).value) <= 1e-12


@pytest.mark.parametrize("x", [1e-3, 0.1, 0.5, 1.0, 2.7, 10.0, 33.3, 99.9, 100.0])
def test_gamma_vs_lgamma(x):
    # math.lgamma is an independent libm implementation; exp() costs ~|lgamma| ulps
    ref = math.exp(math.lgamma(x))
    assert rel(gamma_fn(x).value, ref) <= 1e-13 * max(1.0, abs(math.lgamma(x)))


def test_gamma_domain():
    for bad in (0.0, -1.0, 100.5):
        with pytest.raises(DomainError):
            gamma_fn(bad)


# --- zeta -----------------------------------------------------------------


def test_zeta_even_closed_forms():
    assert rel(zeta_fn(2).value, math.pi**2 / 6) <= 1e-13
    assert rel(zeta_fn(4).value, math.pi**4 / 90) <= 1e-13
    assert rel(zeta_fn(6).value, math.pi**6 / 945) <= 1e-13
    assert rel(zeta_fn(8).value, math.pi**8 / 9450) <= 1e-13


def test_zeta3_against_partial_sums():
    n = 20000
    partial = math.fsum(k**-3.0 for k in range(1, n))
    # Euler-Maclaurin tail of sum_{k >= n} k^-3; next term is O(n^-6)
    tail = 0.5 / n**2 + 0.5 / n**3 + 0.25 / n**4
    assert rel(zeta_fn(3).value, partial + tail) <= 1e-13


@pytest.mark.parametrize("s", [7.0, 12.5, 24.9, 25.0, 40.0, 100.0])
def test_zeta_vs_direct_sum(s):
    # terms beyond k = 200 are below 200^-7 ~ 8e-17
    direct = math.fsum(k**-s for k in range(1, 200))
    assert rel(zeta_fn(s).value, direct) <= 1e-13


@given(st.floats(1.01, 99.0))
def test_zeta_nonincreasing(s):
    assert zeta_fn(s + 0.5).value <= zeta_fn(s).value


def test_zeta_near_pole():
    s = 1 + 2e-6
    # zeta(s) = 1/(s-1) + gamma_E + O(s-1)
    assert rel(zeta_fn(s).value, 1 / (s - 1) + 0.5772156649015329) < 1e-9


def test_zeta_domain():
    for bad in (1.0, 1 + 1e-7, 0.5, 101.0):
        with pytest.raises(DomainError):
            zeta_fn(bad)
