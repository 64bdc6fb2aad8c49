"""Modified Bessel K, Gamma and Riemann zeta in double precision.

K_nu(x) is evaluated by regime:

* half-integer orders: the terminating closed form
  ``K_{n+1/2}(x) = sqrt(pi/2x) e^{-x} sum_k (n+k)!/(k!(n-k)!) (2x)^{-k}``;
* ``x <= 2``: Temme's series for ``K_mu, K_{mu+1}`` with ``|mu| <= 1/2``;
* ``2 < x < 25``: Steed's continued fraction (Thompson-Barnett CF2);
* ``x >= 25``: the Hankel asymptotic expansion, truncated at machine precision.

The last three produce a pair of orders in ``[-1/2, 3/2]`` which forward
recurrence (stable for K) lifts to the requested order. Array kernels are
exposed for the series engine; the scalar functions wrap them with the
contract checks and error estimates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ._numerics import EPS, adaptive_gauss_kronrod
from .errors import DomainError, SpecialFunctionOverflow

__all__ = [
    "SpecFunResult",
    "bessel_k",
    "bessel_k_scaled",
    "bessel_k_oracle",
    "bessel_k_array",
    "bessel_k_pair_array",
    "gamma_fn",
    "zeta_fn",
]

NU_MAX = 50.0
X_MIN = 1e-6
X_MAX = 700.0
_TEMME_MAX = 2.0
_ASYMPTOTIC_MIN = 25.0

# Taylor coefficients of 1/Gamma(1+t) about t = 0.
_RGAMMA1P = (
    1.0,
    0.5772156649015329,
    -0.6558780715202539,
    -0.04200263503409524,
    0.16653861138229148,
    -0.04219773455554433,
    -0.009621971527876973,
    0.0072189432466631,
    -0.0011651675918590652,
    -0.00021524167411495098,
    0.0001280502823881162,
    -2.013485478078824e-05,
    -1.2504934821426706e-06,
    1.133027231981696e-06,
    -2.056338416977607e-07,
    6.116095104481416e-09,
    5.002007644469223e-09,
    -1.18127457048702e-09,
    1.0434267116911005e-10,
    7.782263439905071e-12,
    -3.696805618642206e-12,
    5.100370287454476e-13,
    -2.0583260535665066e-14,
    -5.348122539423018e-15,
    1.2267786282382608e-15,
    -1.1812593016974588e-16,
    1.1866922547516004e-18,
    1.4123806553180319e-18,
)


@dataclass(frozen=True)
class SpecFunResult:
    """A special-function value with an absolute error estimate."""

    value: float
    abs_error_estimate: float

    def __float__(self) -> float:
        return self.value


def _rgamma1p(t: float) -> float:
    """1/Gamma(1+t) for |t| <= 1/2 (Horner on the Taylor series)."""
    acc = 0.0
    for c in reversed(_RGAMMA1P):
        acc = acc * t + c
    return acc


def _temme_gammas(mu: float) -> tuple[float, float, float, float]:
    """gam1, gam2, 1/Gamma(1+mu), 1/Gamma(1-mu) for |mu| <= 1/2.

    gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu) is taken from the odd
    Taylor coefficients directly, so there is no cancellation near mu = 0.
    """
    mu2 = mu * mu
    gam1 = 0.0
    for c in reversed(_RGAMMA1P[1::2]):
        gam1 = gam1 * mu2 + c
    gam1 = -gam1
    gam2 = 0.0
    for c in reversed(_RGAMMA1P[0::2]):
        gam2 = gam2 * mu2 + c
    return gam1, gam2, _rgamma1p(mu), _rgamma1p(-mu)


def _temme_pair(mu: float, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Temme's series: K_mu(x), K_{mu+1}(x) for 0 < x <= 2, |mu| <= 1/2."""
    x2 = 0.5 * x
    pimu = math.pi * mu
    fact = 1.0 if abs(pimu) < EPS else pimu / math.sin(pimu)
    d = -np.log(x2)
    e = mu * d
    with np.errstate(invalid="ignore", divide="ignore"):
        fact2 = np.where(np.abs(e) < 1e-5, 1.0 + e * e / 6.0, np.sinh(e) / e)
    gam1, gam2, gampl, gammi = _temme_gammas(mu)
    ff = fact * (gam1 * np.cosh(e) + gam2 * fact2 * d)
    total = ff.copy()
    ee = np.exp(e)
    p = 0.5 * ee / gampl
    q = 0.5 / (ee * gammi)
    c = np.ones_like(x)
    dd = x2 * x2
    total1 = p.copy()
    mu2 = mu * mu
    for i in range(1, 200):
        ff = (i * ff + p + q) / (i * i - mu2)
        c = c * dd / i
        p = p / (i - mu)
        q = q / (i + mu)
        delta = c * ff
        total += delta
        total1 += c * (p - i * ff)
        if np.all(np.abs(delta) <= np.abs(total) * EPS):
            break
    return total, total1 * (2.0 / x)


def _steed_pair(mu: float, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Steed's CF2: e^x K_mu(x), e^x K_{mu+1}(x) for x > 2, |mu| <= 1/2."""
    a1 = 0.25 - mu * mu
    s_out = np.empty_like(x)
    h_out = np.empty_like(x)
    idx = np.arange(x.size)
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = d.copy()
    delh = d.copy()
    q1 = np.zeros_like(x)
    q2 = np.ones_like(x)
    q = np.full_like(x, a1)
    c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, 2000):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1 = q2
        q2 = qnew
        q = q + c * qnew
        b = b + 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h = h + delh
        dels = q * delh
        s = s + dels
        done = np.abs(dels) < np.abs(s) * EPS
        if np.any(done):
            s_out[idx[done]] = s[done]
            h_out[idx[done]] = h[done]
            keep = ~done
            if not np.any(keep):
                break
            idx, b, d, h, delh, q1, q2, q, s = (
                arr[keep] for arr in (idx, b, d, h, delh, q1, q2, q, s)
            )
    else:  # pragma: no cover - CF2 converges in well under 2000 steps for x > 2
        raise ArithmeticError("continued fraction for K did not converge")
    h_out *= a1
    k_mu = np.sqrt(math.pi / (2.0 * x)) / s_out
    k_mu1 = k_mu * (mu + x + 0.5 - h_out) / x
    return k_mu, k_mu1


def _hankel_scaled(nu: float, x: np.ndarray) -> np.ndarray:
    """e^x K_nu(x) from the large-argument expansion; x >= 25, |nu| <= 3/2."""
    four_nu2 = 4.0 * nu * nu
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, 60):
        term = term * (four_nu2 - (2 * k - 1) ** 2) / (k * 8.0 * x)
        total += term
        if np.all(np.abs(term) <= EPS * np.abs(total)):
            break
    return np.sqrt(math.pi / (2.0 * x)) * total


@lru_cache(maxsize=None)
def _half_integer_coeffs(n: int) -> tuple[float, ...]:
    return tuple(
        float(math.factorial(n + k) // (math.factorial(k) * math.factorial(n - k)))
        for k in range(n + 1)
    )


def _half_integer_scaled(n: int, x: np.ndarray) -> np.ndarray:
    """e^x K_{n+1/2}(x) from the terminating closed form."""
    y = 0.5 / x
    acc = np.zeros_like(x)
    for c in reversed(_half_integer_coeffs(n)):
        acc = acc * y + c
    return np.sqrt(math.pi / (2.0 * x)) * acc


def _is_half_integer(nu: float) -> bool:
    two_nu = 2.0 * nu
    return two_nu == math.floor(two_nu) and int(two_nu) % 2 == 1


def bessel_k_pair_array(nu: float, x, scaled: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """K_nu(x) and K_{nu+1}(x) on an array of positive arguments.

    No contract checks beyond ``x > 0``; values that overflow come back as
    ``inf``. With ``scaled=True`` both values are multiplied by ``e^x``.
    """
    x = np.asarray(x, dtype=float)
    shape = x.shape
    x = x.ravel()
    if np.any(x <= 0):
        raise DomainError("bessel_k requires x > 0")
    with np.errstate(over="ignore", invalid="ignore"):
        if _is_half_integer(nu):
            n = int(nu - 0.5)
            k0 = _half_integer_scaled(n, x)
            k1 = _half_integer_scaled(n + 1, x)
        else:
            nl = int(nu + 0.5)
            mu = nu - nl
            k0 = np.empty_like(x)
            k1 = np.empty_like(x)
            small = x <= _TEMME_MAX
            large = x >= _ASYMPTOTIC_MIN
            mid = ~(small | large)
            if np.any(small):
                xs = x[small]
                a, b = _temme_pair(mu, xs)
                ex = np.exp(xs)
                k0[small] = a * ex
                k1[small] = b * ex
            if np.any(mid):
                k0[mid], k1[mid] = _steed_pair(mu, x[mid])
            if np.any(large):
                xl = x[large]
                k0[large] = _hankel_scaled(mu, xl)
                k1[large] = _hankel_scaled(mu + 1.0, xl)
            two_over_x = 2.0 / x
            for i in range(1, nl + 1):
                k0, k1 = k1, (mu + i) * two_over_x * k1 + k0
        if not scaled:
            decay = np.exp(-x)
            k0 = k0 * decay
            k1 = k1 * decay
    return k0.reshape(shape), k1.reshape(shape)


def bessel_k_array(nu: float, x, scaled: bool = False) -> np.ndarray:
    """K_nu on an array (see :func:`bessel_k_pair_array`)."""
    return bessel_k_pair_array(nu, x, scaled)[0]


def _check_bessel(nu: float, x: float) -> None:
    if not (0.0 <= nu <= NU_MAX):
        raise DomainError(f"order nu={nu!r} outside [0, {NU_MAX:g}]")
    if not (X_MIN <= x <= X_MAX):
        if x <= 0:
            raise DomainError(f"argument x={x!r} must be positive")
        raise DomainError(f"argument x={x!r} outside [{X_MIN:g}, {X_MAX:g}]")


def _bessel_error(nu: float, value: float) -> float:
    steps = 0 if _is_half_integer(nu) else int(nu + 0.5)
    return 8.0 * EPS * (1 + steps) * abs(value)


def _finite_or_raise(value: float, what: str) -> float:
    if not math.isfinite(value):
        raise SpecialFunctionOverflow(f"{what} is not representable in double precision")
    return value


def bessel_k(nu: float, x: float) -> SpecFunResult:
    """Modified Bessel function of the second kind, K_nu(x).

    Contract: ``0 <= nu <= 50`` and ``1e-6 <= x <= 700``. Raises
    :class:`DomainError` outside it and :class:`SpecialFunctionOverflow`
    when the true value exceeds the double range.
    """
    nu, x = float(nu), float(x)
    _check_bessel(nu, x)
    value = float(bessel_k_array(nu, np.array([x]))[0])
    _finite_or_raise(value, f"K_{nu:g}({x:g})")
    if value == 0.0:
        raise SpecialFunctionOverflow(f"K_{nu:g}({x:g}) underflows; use bessel_k_scaled")
    return SpecFunResult(value, _bessel_error(nu, value))


def bessel_k_scaled(nu: float, x: float) -> SpecFunResult:
    """Exponentially scaled K: ``e^x K_nu(x)``; same contract as :func:`bessel_k`."""
    nu, x = float(nu), float(x)
    _check_bessel(nu, x)
    value = float(bessel_k_array(nu, np.array([x]), scaled=True)[0])
    _finite_or_raise(value, f"exp(x) K_{nu:g}({x:g})")
    return SpecFunResult(value, _bessel_error(nu, value))


def bessel_k_oracle(nu: float, x: float) -> float:
    """K_nu(x) from ``int_0^inf exp(-x cosh t) cosh(nu t) dt``.

    Slow reference used by the test-suite only; valid for ``0 <= nu <= 10``
    and ``1e-3 <= x <= 60``. The exponent is shifted by its maximum so the
    integrand stays O(1); the upper limit is pushed out until the integrand
    has dropped 45 e-folds below that maximum, far under 1e-16 of the total.
    """
    nu, x = float(nu), float(x)
    if not (0.0 <= nu <= 10.0) or not (1e-3 <= x <= 60.0):
        raise DomainError("bessel_k_oracle defined for 0 <= nu <= 10, 1e-3 <= x <= 60")

    def log_integrand(t):
        return -x * np.cosh(t) + nu * t

    t_peak = math.asinh(nu / x) if nu > 0 else 0.0
    shift = float(log_integrand(t_peak))
    t_end = t_peak + 1.0
    while float(log_integrand(t_end)) - shift > -45.0:
        t_end = t_peak + 2.0 * (t_end - t_peak)

    def integrand(t):
        return 0.5 * (np.exp(log_integrand(t) - shift) + np.exp(-x * np.cosh(t) - nu * t - shift))

    breaks = np.linspace(0.0, t_end, 9)
    value, _, _, _ = adaptive_gauss_kronrod(integrand, 0.0, t_end, rtol=2e-15, breakpoints=breaks)
    return value * math.exp(shift)


def gamma_fn(x: float) -> SpecFunResult:
    """Gamma function for ``0 < x <= 100``.

    The argument is split as ``x = m + t`` with ``|t| <= 1/2``; Gamma(1+t)
    comes from the reciprocal Taylor series and the integer part from the
    product ``(1+t)(2+t)...(m-1+t)``.
    """
    x = float(x)
    if not (0.0 < x <= 100.0):
        raise DomainError(f"gamma_fn defined for 0 < x <= 100, got {x!r}")
    m = math.floor(x + 0.5)
    t = x - m
    g1t = 1.0 / _rgamma1p(t)
    if m == 0:
        value = g1t / t
    else:
        value = g1t * math.prod(j + t for j in range(1, m))
    return SpecFunResult(value, 2.0 * EPS * (m + 2) * abs(value))


def _bernoulli_even(count: int) -> list[Fraction]:
    """B_2, B_4, ..., B_{2 count} as exact fractions (Akiyama-Tanigawa)."""
    n_max = 2 * count
    a = [Fraction(0)] * (n_max + 1)
    out = []
    for m in range(n_max + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        if m >= 2 and m % 2 == 0:
            out.append(a[0])
    return out


# B_{2k} / (2k)! for k = 1..20
_EM_COEFFS = tuple(
    float(b / math.factorial(2 * (k + 1))) for k, b in enumerate(_bernoulli_even(20))
)
_ZETA_EM_N = 10


def zeta_fn(s: float) -> SpecFunResult:
    """Riemann zeta for real ``1 + 1e-6 < s <= 100``.

    Euler-Maclaurin with ten leading terms summed directly for s < 25;
    plain summation above, where the terms fall below eps after a handful.
    """
    s = float(s)
    if not (1.0 + 1e-6 < s <= 100.0):
        raise DomainError(f"zeta_fn defined for 1 + 1e-6 < s <= 100, got {s!r}")
    if s >= 25.0:
        terms = [1.0]
        n = 2
        while True:
            t = n ** (-s)
            terms.append(t)
            if t < EPS * 1e-2:
                break
            n += 1
        value = math.fsum(terms)
        return SpecFunResult(value, 2.0 * EPS * value)
    big_n = _ZETA_EM_N
    terms = [n ** (-s) for n in range(1, big_n)]
    terms.append(big_n ** (1.0 - s) / (s - 1.0))
    terms.append(0.5 * big_n ** (-s))
    rising = s  # s (s+1) ... (s+2k-2)
    power = big_n ** (-s - 1.0)
    for k, coeff in enumerate(_EM_COEFFS, start=1):
        term = coeff * rising * power
        terms.append(term)
        if abs(term) < EPS * 1e-2 * abs(terms[0]):
            break
        rising *= (s + 2 * k - 1) * (s + 2 * k)
        power /= big_n * big_n
    value = math.fsum(terms)
    return SpecFunResult(value, 4.0 * EPS * abs(value))
