import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from casimir_scalar import core
from casimir_scalar.core import (
    DimensionlessPoint,
    force_massless,
    force_series_1d,
    force_series_3d,
    force_series_general,
    truncation_bound,
)
from casimir_scalar.errors import DomainError, ToleranceNotMet
from casimir_scalar.quadrature_oracle import force_quadrature_1d, force_quadrature_general
from casimir_scalar.specfun import bessel_k_oracle


def rel(a, b):
    return abs(a - b) / abs(b)


def oracle_general(dim, mu, n_max):
    """Direct sum of the general-D series with the integral-representation Bessel oracle."""
    xi = 2 * mu
    nu = 0.5 * (dim + 1)
    terms = []
    for n in range(1, n_max + 1):
        x = n * xi
        terms.append(x ** (-nu) * (x * bessel_k_oracle(nu + 1, x) - bessel_k_oracle(nu, x)))
    return -2 * (xi / (2 * math.sqrt(2 * math.pi))) ** (dim + 1) * math.fsum(terms)


# --- types ----------------------------------------------------------------


def test_point_derives_xi():
    p = DimensionlessPoint(3, 0.75)
    assert p.xi == 1.5
    with pytest.raises(DomainError):
        DimensionlessPoint(0, 1.0)
    with pytest.raises(DomainError):
        DimensionlessPoint(1, -1.0)


# --- massless -------------------------------------------------------------


def test_massless_d1():
    assert rel(force_massless(1).f, -math.pi / 24) <= 1e-14


def test_massless_d3():
    assert rel(force_massless(3).f, -(math.pi**2) / 480) <= 1e-14


def test_massless_d3_general_formula_identity():
    general = -3 * math.gamma(2) * (math.pi**4 / 90) / (2 * math.sqrt(math.pi)) ** 4
    assert rel(general, -(math.pi**2) / 480) <= 1e-15


@pytest.mark.parametrize("dim", [0, 21, 2.5])
def test_massless_domain(dim):
    with pytest.raises(DomainError):
        force_massless(dim)


# --- force_series_1d ------------------------------------------------------


def test_1d_small_mu_limit():
    assert rel(force_series_1d(1e-6).f, -math.pi / 24) <= 1e-5


def test_1d_matches_quadrature_at_mu_1():
    assert rel(force_series_1d(1.0).f, force_quadrature_1d(1.0).value) <= 1e-8


def test_1d_mu_10_screened_and_dominated_by_first_term():
    f10 = force_series_1d(10.0).f
    assert abs(f10) <= abs(force_series_1d(1.0).f) * 1e-4
    # n = 1, 2 terms from the Bessel oracle; n = 3 is e^-60 smaller
    ref = -(100.0 / math.pi) * sum(
        bessel_k_oracle(2, 20.0 * n) - bessel_k_oracle(1, 20.0 * n) / (20.0 * n) for n in (1, 2)
    )
    assert rel(f10, ref) <= 1e-12


def test_tail_bound_reported_within_tolerance():
    for mu in (0.01, 0.3, 4.0):
        fv = force_series_1d(mu, tol=1e-12)
        assert fv.diagnostics.tail_bound <= 1e-12 * abs(fv.f)
        assert not fv.diagnostics.crossover_used


def test_budget_exhaustion_raises():
    with pytest.raises(ToleranceNotMet):
        force_series_1d(0.01, max_terms=20)


# --- force_series_3d ------------------------------------------------------


def test_3d_small_mu_limit():
    assert rel(force_series_3d(1e-6).f, -(math.pi**2) / 480) <= 1e-5


def test_3d_equals_general():
    assert rel(force_series_3d(1.0).f, force_series_general(3, 1.0).f) <= 1e-12


def test_3d_matches_quadrature_at_mu_2():
    assert rel(force_series_3d(2.0).f, force_quadrature_general(3, 2.0).value) <= 1e-8


# --- force_series_general -------------------------------------------------


@pytest.mark.parametrize("dim", [1, 2, 3, 4])
def test_general_matches_oracle_bessel_sum(dim):
    # at mu = 1 the terms fall like e^-2n; n <= 30 leaves < e^-60
    assert rel(force_series_general(dim, 1.0).f, oracle_general(dim, 1.0, 30)) <= 1e-12


def test_general_d1_equals_1d():
    assert rel(force_series_general(1, 1.0).f, force_series_1d(1.0).f) <= 1e-12


def test_general_d2_matches_quadrature():
    assert rel(force_series_general(2, 1.0).f, force_quadrature_general(2, 1.0).value) <= 1e-8


@pytest.mark.parametrize("mu", [0.1, 0.5, 1.0, 2.0, 5.0, 10.0])
def test_cross_formula_identities(mu):
    assert rel(force_series_general(1, mu).f, force_series_1d(mu).f) <= 1e-12
    assert rel(force_series_general(3, mu).f, force_series_3d(mu).f) <= 1e-12


@pytest.mark.parametrize("dim", [1, 2, 3, 4, 5])
def test_massless_limit_at_1e_4(dim):
    assert rel(force_series_general(dim, 1e-4).f, force_massless(dim).f) <= 1e-3


@pytest.mark.parametrize("dim", [1, 3])
def test_mass_screening_grid(dim):
    mags = [abs(force_series_general(dim, mu).f) for mu in (0.0, 0.5, 1.0, 2.0, 5.0, 10.0)]
    assert all(b < a for a, b in zip(mags, mags[1:]))
    assert mags[-1] / mags[0] <= 1e-6


@given(st.integers(1, 8), st.floats(1e-3, 30.0), st.floats(1.01, 3.0))
def test_attractive_and_screened(dim, mu, factor):
    a = force_series_general(dim, mu).f
    b = force_series_general(dim, mu * factor).f
    assert a < 0 and b < 0
    assert abs(b) < abs(a)


def test_high_dimension_is_finite():
    fv = force_series_general(20, 0.5)
    assert fv.f < 0 and math.isfinite(fv.f)


def test_fault_injection_perturbs_first_term():
    clean = force_series_general(1, 1.0).f
    dirty = force_series_general(1, 1.0, _fault=1e-6).f
    assert 1e-8 < rel(dirty, clean) < 1e-6


def test_deterministic():
    a = force_series_general(3, 0.37)
    b = force_series_general(3, 0.37)
    assert a == b


# --- crossover ------------------------------------------------------------


def test_crossover_below_cutoff_returns_massless():
    fv = force_series_general(2, 5e-7)
    assert fv.f == force_massless(2).f
    assert fv.diagnostics.crossover_used


def test_crossover_window_budget_fallback_is_flagged_and_covers_deviation():
    mu = 1e-4
    fv = force_series_general(1, mu, max_terms=1000)
    assert fv.diagnostics.crossover_used
    exact = force_series_general(1, mu).f
    assert abs(fv.f - exact) <= fv.abs_error


def test_mu_zero_is_massless_without_flag():
    fv = force_series_general(3, 0.0)
    assert fv.f == force_massless(3).f
    assert not fv.diagnostics.crossover_used


def test_domain_errors():
    with pytest.raises(DomainError):
        force_series_general(3, -0.1)
    with pytest.raises(DomainError):
        force_series_general(3, 1.0, tol=0.0)
    with pytest.raises(DomainError):
        force_series_general(21, 1.0)


# --- truncation_bound -----------------------------------------------------


def test_bound_geometric_form():
    dim, mu, n0 = 3, 2.0, 10
    xi = 2 * mu
    x = (n0 + 1) * xi
    nu = 0.5 * (dim + 1)
    first = 2 * (xi / (2 * math.sqrt(2 * math.pi))) ** (dim + 1) * x ** (-nu) * (
        x * bessel_k_oracle(nu + 1, x) - bessel_k_oracle(nu, x)
    )
    assert truncation_bound(dim, mu, n0) <= first / (1 - math.exp(-xi)) * (1 + 1e-12)


@pytest.mark.parametrize("dim,mu", [(1, 0.05), (2, 0.3), (3, 1.0), (5, 0.2)])
def test_bound_monotone_in_n0(dim, mu):
    bounds = [truncation_bound(dim, mu, n) for n in range(1, 40)]
    assert all(b < a for a, b in zip(bounds, bounds[1:]))


@pytest.mark.parametrize("dim,mu,n0", [(1, 0.05, 5), (1, 0.5, 3), (2, 0.3, 4), (3, 1.0, 2), (6, 0.1, 20)])
def test_bound_dominates_actual_tail(dim, mu, n0):
    xi = 2 * mu
    n = np.arange(n0 + 1, 10 * n0 + 200, dtype=float)
    x = n * xi
    terms = core._unscale(core._terms_general(dim)(x, True), x)
    tail = abs(core._prefactor_general(dim, xi)) * math.fsum(terms)
    assert tail <= truncation_bound(dim, mu, n0)


def test_bound_domain():
    with pytest.raises(DomainError):
        truncation_bound(3, 0.0, 5)
    with pytest.raises(DomainError):
        truncation_bound(3, 1.0, 0)
