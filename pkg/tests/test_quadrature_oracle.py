import math
import warnings

import numpy as np
import pytest

from casimir_scalar import quadrature_oracle as qo
from casimir_scalar.core import force_series_1d, force_series_general
from casimir_scalar.errors import DomainError, ExtrapolationWarning
from casimir_scalar.specfun import bessel_k_oracle


def rel(a, b):
    return abs(a - b) / abs(b)


# --- oscillatory integrator -----------------------------------------------


@pytest.mark.parametrize("b", [1.0, 2.0, 5.0])
def test_cosine_integral_gives_k0(b):
    r = qo.oscillatory_cosine_integral(lambda t: 1.0 / np.sqrt(t * t + 1.0), b)
    assert abs(r.value - bessel_k_oracle(0, b)) <= 1e-10
    assert r.converged


# --- inner_integral_1d ----------------------------------------------------


@pytest.mark.parametrize("n", [1, 2])
def test_inner_integral_closed_form(n):
    r = qo.inner_integral_1d(n, 1.0)
    assert abs(r.value - bessel_k_oracle(0, 2.0 * n) / math.pi) <= 1e-10
    assert r.converged and r.nodes_used > 0


def test_inner_integral_even_in_n():
    vals, _, _ = qo._inner_values(np.array([1.7, -1.7]), 0.8)
    assert vals[0] == vals[1]


def test_inner_integral_domain():
    with pytest.raises(DomainError):
        qo.inner_integral_1d(0, 1.0)
    with pytest.raises(DomainError):
        qo.inner_integral_1d(1, 0.0)


# --- numerical second derivative ------------------------------------------


def test_fd_second_derivative_of_inner_integral():
    # d^2/dn^2 K_0(n xi) = xi^2 (K_0 + K_2) / 2 at n = 1, xi = 2
    from casimir_scalar._numerics import second_derivative

    d2, _, _ = second_derivative(lambda ns: qo._inner_values(ns, 1.0)[0] * math.pi, 1.0)
    exact = 4.0 * (bessel_k_oracle(0, 2.0) + bessel_k_oracle(2, 2.0)) / 2
    assert rel(d2, exact) <= 1e-8


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("xi", [1.0, 2.0, 4.0])
def test_fd_matches_analytic_derivative_of_k0(n, xi):
    from casimir_scalar._numerics import second_derivative

    mu = 0.5 * xi
    d2, _, _ = second_derivative(lambda ns: qo._inner_values(ns, mu)[0] * math.pi, float(n))
    x = n * xi
    exact = xi * xi * (bessel_k_oracle(0, x) + bessel_k_oracle(2, x)) / 2
    # absolute: the quadrature rounding floor (~1e-15) divided by h^2 caps the
    # relative accuracy of the exponentially small derivatives at large n xi
    assert abs(d2 - exact) <= 1e-8


# --- force_quadrature_1d --------------------------------------------------


@pytest.mark.parametrize("mu", [0.5, 1.0, 2.0])
def test_force_quadrature_1d_matches_series(mu):
    r = qo.force_quadrature_1d(mu)
    assert r.converged
    assert rel(r.value, force_series_1d(mu).f) <= 1e-8


# --- radial integral ------------------------------------------------------


def test_radial_d3_closed_form():
    r = qo.radial_integral(3, 1, 1.0)
    assert abs(r.value - 0.5 * bessel_k_oracle(1, 2.0)) <= 1e-10


def test_radial_d2_vs_trapezoid_refinement():
    from casimir_scalar.specfun import bessel_k_array

    # brute force: trapezoid on [0, 30] with Richardson on 2^k panels
    def trap(m):
        q = np.linspace(0.0, 30.0, m + 1)
        f = bessel_k_array(0.0, 2.0 * np.sqrt(q * q + 1.0))
        return (30.0 / m) * (f.sum() - 0.5 * (f[0] + f[-1]))

    # the integrand is even in q, so the trapezoid rule converges spectrally
    ref = trap(4096)
    assert abs(trap(2048) - ref) < 1e-14
    assert abs(qo.radial_integral(2, 1, 1.0).value - ref) <= 1e-9


def test_radial_decreasing_in_n():
    vals = [qo.radial_integral(4, n, 0.7).value for n in range(1, 6)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_radial_domain():
    with pytest.raises(DomainError):
        qo.radial_integral(1, 1, 1.0)


def test_solid_angle_values():
    assert qo.solid_angle(3) == pytest.approx(2 * math.pi, rel=1e-15)
    assert qo.solid_angle(4) == pytest.approx(4 * math.pi, rel=1e-14)
    assert qo.solid_angle(2) == pytest.approx(2.0, rel=1e-14)


# --- force_quadrature_general ---------------------------------------------


@pytest.mark.parametrize("dim,mu", [(3, 1.0), (2, 1.0), (5, 2.0), (2, 0.5), (3, 5.0), (5, 0.5)])
def test_force_quadrature_general_matches_series(dim, mu):
    r = qo.force_quadrature_general(dim, mu)
    assert r.converged
    assert rel(r.value, force_series_general(dim, mu).f) <= 1e-8


def test_force_quadrature_deterministic():
    assert qo.force_quadrature_general(3, 1.3) == qo.force_quadrature_general(3, 1.3)


def test_force_quadrature_domain():
    with pytest.raises(DomainError):
        qo.force_quadrature_general(11, 1.0)
    with pytest.raises(DomainError):
        qo.force_quadrature_general(3, 0.0)


# --- mode sum -------------------------------------------------------------


def test_regulated_sum_finite_while_pieces_grow():
    cont = []
    for lam in (0.5, 0.25, 0.125):
        s = qo.mode_sum_regulated(1.0, lam)
        assert math.isfinite(s) and abs(s) < 0.1
        cont.append(qo.mode_sum_continuum(1.0, lam))
    # each piece grows like 1/lambda^2 while the difference stays bounded
    assert cont[1] > 3.5 * cont[0] and cont[2] > 3.5 * cont[1]


def test_continuum_massless_elementary():
    assert qo.mode_sum_continuum(0.0, 1.0) == pytest.approx(1.0 / (2 * math.pi), rel=1e-13)


def test_regulated_domain():
    with pytest.raises(DomainError):
        qo.mode_sum_regulated(1.0, 0.0)
    with pytest.raises(DomainError):
        qo.mode_sum_regulated(1.0, 0.5, n_max=3)


@pytest.mark.parametrize("mu", [0.5, 1.0, 2.0])
def test_mode_sum_ladder_matches_series(mu):
    ladder = qo.mode_sum_ladder(mu)
    assert rel(ladder.extrapolated, force_series_1d(mu).f) <= 1e-3
    assert ladder.lambdas == tuple(0.5 / 2**k for k in range(7))


def test_mode_sum_massless_is_minus_pi_over_24():
    assert rel(qo.mode_sum_ladder(0.0).extrapolated, -math.pi / 24) <= 1e-6


# --- extrapolate_ladder ---------------------------------------------------


LAMS = tuple(0.5 / 2**k for k in range(6))


def test_extrapolate_constant():
    assert qo.extrapolate_ladder(qo.RegulatorLadder(LAMS, (3.25,) * 6)) == 3.25


def test_extrapolate_quadratic_exact():
    vals = tuple(1.5 - 2.0 * h + 0.75 * h * h for h in LAMS)
    assert abs(qo.extrapolate_ladder(qo.RegulatorLadder(LAMS, vals)) - 1.5) <= 1e-14


def test_extrapolate_validates_ladder():
    with pytest.raises(DomainError):
        qo.extrapolate_ladder(qo.RegulatorLadder(LAMS[:3], (1.0,) * 3))
    with pytest.raises(DomainError):
        qo.extrapolate_ladder(qo.RegulatorLadder((1.0, 0.4, 0.2, 0.1), (1.0,) * 4))


def test_extrapolate_warns_on_divergence():
    vals = tuple((-1.0) ** k * 4.0**k for k in range(6))
    with pytest.warns(ExtrapolationWarning):
        qo.extrapolate_ladder(qo.RegulatorLadder(LAMS, vals))


def test_extrapolate_quiet_on_smooth_data():
    vals = tuple(math.exp(h) for h in LAMS)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert abs(qo.extrapolate_ladder(qo.RegulatorLadder(LAMS, vals)) - 1.0) < 1e-7
