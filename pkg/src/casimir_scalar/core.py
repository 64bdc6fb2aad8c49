"""Dimensionless Casimir force between Dirichlet plates.

Units: a = hbar = c = 1, so the reduced mass is mu = m c a / hbar and the
Bessel argument is ``n xi`` with ``xi = 2 mu``. The pressure is
``F = f hbar c / a^(D+1)``; f < 0 is attraction.

Dimensionless prefactors, from the dimensionful forms with m = mu hbar/(c a):

* D = 1: ``m^2 c^3 / (pi hbar) = (hbar c / a^2) mu^2 / pi``
* D = 3: ``m^4 c^5 / (2 pi^2 hbar^3) = (hbar c / a^4) mu^4 / (2 pi^2)``

Every series below has positive terms ``t(x)`` (after the sign is pulled
out) for which ``e^x t(x)`` is decreasing, because ``e^x K_nu(x)`` and
negative powers of x are. Hence the tail after term n0 is bounded by
``t((n0+1) xi) / (1 - e^-xi)``, which is the stopping rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._numerics import EPS
from .errors import DomainError, ToleranceNotMet
from .specfun import bessel_k_pair_array, gamma_fn, zeta_fn

__all__ = [
    "DimensionlessPoint",
    "SeriesDiagnostics",
    "ForceValue",
    "force_massless",
    "force_series_1d",
    "force_series_3d",
    "force_series_general",
    "truncation_bound",
    "force",
    "MASSLESS_CUTOFF",
    "CROSSOVER_MAX",
    "DEFAULT_TOL",
    "DEFAULT_MAX_TERMS",
]

DEFAULT_TOL = 1e-12
DEFAULT_MAX_TERMS = 10**6
DIM_MAX = 20
# below MASSLESS_CUTOFF the massless closed form is returned outright; up to
# CROSSOVER_MAX it replaces the series when the term budget is too small
MASSLESS_CUTOFF = 1e-6
CROSSOVER_MAX = 1e-3
# relative accuracy of one series term (Bessel kernels plus a few products)
_TERM_REL_ERR = 1e-14


@dataclass(frozen=True)
class DimensionlessPoint:
    """Physics input of the engine: spatial dimension and reduced mass."""

    dim: int
    mu: float
    xi: float = field(init=False)

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise DomainError(f"dim must be a positive integer, got {self.dim!r}")
        if not (self.mu >= 0.0) or not math.isfinite(self.mu):
            raise DomainError(f"mu must be finite and >= 0, got {self.mu!r}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "xi", 2.0 * self.mu)


@dataclass(frozen=True)
class SeriesDiagnostics:
    terms_used: int
    tail_bound: float
    crossover_used: bool = False


@dataclass(frozen=True)
class ForceValue:
    """Dimensionless force ``f`` with ``F = f hbar c / a^(D+1)``.

    ``abs_error`` combines the truncation bound, term rounding and, when the
    massless form stands in for a small but nonzero mass, the crossover
    deviation estimate.
    """

    f: float
    diagnostics: SeriesDiagnostics
    abs_error: float = 0.0


def _check_dim(dim) -> int:
    if isinstance(dim, bool) or int(dim) != dim:
        raise DomainError(f"dim must be an integer, got {dim!r}")
    dim = int(dim)
    if not (1 <= dim <= DIM_MAX):
        raise DomainError(f"dim must lie in [1, {DIM_MAX}], got {dim}")
    return dim


def _check_mu_tol(mu, tol) -> tuple[float, float]:
    mu = float(mu)
    tol = float(tol)
    if not (mu >= 0.0) or not math.isfinite(mu):
        raise DomainError(f"mu must be finite and >= 0, got {mu!r}")
    if not (tol > 0.0) or not math.isfinite(tol):
        raise DomainError(f"tol must be positive, got {tol!r}")
    return mu, tol


def force_massless(dim: int) -> ForceValue:
    """Massless limit ``f = -D Gamma((D+1)/2) zeta(D+1) / (2 sqrt(pi))^(D+1)``."""
    dim = _check_dim(dim)
    g = gamma_fn(0.5 * (dim + 1))
    z = zeta_fn(dim + 1.0)
    f = -dim * g.value * z.value / (2.0 * math.sqrt(math.pi)) ** (dim + 1)
    rel = g.abs_error_estimate / g.value + z.abs_error_estimate / z.value + 4 * EPS
    return ForceValue(f, SeriesDiagnostics(terms_used=1, tail_bound=0.0), abs(f) * rel)


# ---------------------------------------------------------------------------
# term kernels: positive terms, argument x = n xi, optionally scaled by e^x


def _terms_1d(x: np.ndarray, scaled: bool) -> np.ndarray:
    """K_2(x) - K_1(x)/x."""
    k1, k2 = bessel_k_pair_array(1.0, x, scaled)
    return k2 - k1 / x


def _terms_3d(x: np.ndarray, scaled: bool) -> np.ndarray:
    """(K_3(x) - K_2(x)/x) / x."""
    k2, k3 = bessel_k_pair_array(2.0, x, scaled)
    return (k3 - k2 / x) / x


def _terms_general(dim: int) -> Callable[[np.ndarray, bool], np.ndarray]:
    """x^-(D+1)/2 (x K_{nu+1} - K_nu), nu = (D+1)/2.

    Written via K_{nu+1} = K_{nu-1} + (2 nu / x) K_nu as
    x^-(D+1)/2 (x K_{nu-1} + D K_nu), which has no cancellation.
    """
    nu = 0.5 * (dim + 1)
    power = -0.5 * (dim + 1)

    def terms(x: np.ndarray, scaled: bool) -> np.ndarray:
        km1, k = bessel_k_pair_array(nu - 1.0, x, scaled)
        return x**power * (x * km1 + dim * k)

    return terms


def _prefactor_1d(xi: float) -> float:
    mu = 0.5 * xi
    return -(mu * mu) / math.pi


def _prefactor_3d(xi: float) -> float:
    mu = 0.5 * xi
    return -(mu**4) / (2.0 * math.pi**2)


def _prefactor_general(dim: int, xi: float) -> float:
    return -2.0 * (xi / (2.0 * math.sqrt(2.0 * math.pi))) ** (dim + 1)


def _unscale(values: np.ndarray, x: np.ndarray) -> np.ndarray:
    return values * np.exp(-x)


def _sum_series(terms, xi: float, tol: float, max_terms: int, fault: float = 0.0):
    """Sum positive terms t(n xi), n = 1, 2, ..., until the tail bound is met.

    Terms are produced in chunks, scaled by e^x and multiplied back, then
    accumulated with an exactly rounded sum in increasing n. Returns
    ``(sum, n_terms, tail_bound)`` for the unsigned, unprefixed series.
    """
    ratio = -math.expm1(-xi)  # 1 - e^-xi without cancellation
    pieces: list[np.ndarray] = []
    running = 0.0
    start = 1
    chunk = 64
    while start <= max_terms:
        stop = min(start + chunk, max_terms + 2)
        n = np.arange(start, stop, dtype=float)
        x = n * xi
        t = _unscale(terms(x, True), x)
        if start == 1 and fault:
            t[0] *= 1.0 + fault
        # candidate stopping points inside this chunk: keep term i, bound by t[i+1]
        partial = running + np.cumsum(t)
        bound = t[1:] / ratio
        ok = np.nonzero(bound <= tol * partial[:-1])[0]
        if ok.size:
            i = int(ok[0])
            n_terms = start + i
            if n_terms > max_terms:
                break
            pieces.append(t[: i + 1])
            total = math.fsum(np.concatenate(pieces))
            return total, n_terms, float(bound[i])
        pieces.append(t[:-1])
        running = float(partial[-2])
        start = stop - 1
        chunk = min(4 * chunk, 1 << 17)
    raise ToleranceNotMet(
        f"series did not reach tol={tol:g} within {max_terms} terms (xi={xi:g})"
    )


def _estimated_terms(xi: float, tol: float) -> float:
    return (math.log(1.0 / tol) + 10.0) / xi


def _crossover_deviation(dim: int, mu: float) -> float:
    """Relative bound on |f(mu) - f(0)| / |f(0)| for mu <= 1e-3.

    The leading correction is O(mu^2), with a logarithm for D = 1; the
    constant is a generous envelope of the measured deviation.
    """
    return 2.0 * mu * mu * (1.0 + abs(math.log(mu)))


def _series_force(dim, mu, tol, max_terms, terms, prefactor, fault=0.0) -> ForceValue:
    if mu < MASSLESS_CUTOFF or (
        mu <= CROSSOVER_MAX and _estimated_terms(2.0 * mu, tol) > max_terms
    ):
        base = force_massless(dim)
        dev = 0.0 if mu == 0.0 else _crossover_deviation(dim, mu) * abs(base.f)
        diag = SeriesDiagnostics(terms_used=1, tail_bound=0.0, crossover_used=mu > 0.0)
        return ForceValue(base.f, diag, base.abs_error + dev)
    xi = 2.0 * mu
    pre = prefactor(xi)
    total, n_terms, tail = _sum_series(terms, xi, tol, max_terms, fault)
    f = pre * total
    tail_abs = abs(pre) * tail
    err = tail_abs + _TERM_REL_ERR * abs(f)
    if mu <= CROSSOVER_MAX:
        # long sums of terms that cancel in the prefactor: widen the estimate
        err += n_terms * EPS * abs(f)
    return ForceValue(f, SeriesDiagnostics(n_terms, tail_abs), err)


def force_series_1d(mu: float, tol: float = DEFAULT_TOL, max_terms: int = DEFAULT_MAX_TERMS) -> ForceValue:
    """``f = -(mu^2/pi) sum_n [K_2(n xi) - K_1(n xi)/(n xi)]`` for D = 1."""
    mu, tol = _check_mu_tol(mu, tol)
    return _series_force(1, mu, tol, max_terms, _terms_1d, _prefactor_1d)


def force_series_3d(mu: float, tol: float = DEFAULT_TOL, max_terms: int = DEFAULT_MAX_TERMS) -> ForceValue:
    """``f = -(mu^4/(2 pi^2)) sum_n [K_3(n xi) - K_2(n xi)/(n xi)] / (n xi)`` for D = 3."""
    mu, tol = _check_mu_tol(mu, tol)
    return _series_force(3, mu, tol, max_terms, _terms_3d, _prefactor_3d)


def force_series_general(
    dim: int,
    mu: float,
    tol: float = DEFAULT_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
    _fault: float = 0.0,
) -> ForceValue:
    """Force for any D in [1, 20].

    ``f = -2 (xi / (2 sqrt(2 pi)))^(D+1) sum_n (n xi)^-(D+1)/2
    [(n xi) K_{(D+3)/2}(n xi) - K_{(D+1)/2}(n xi)]``.

    ``_fault`` multiplies the n = 1 term by ``1 + _fault``; it exists only so
    the verification suite can prove it notices a corrupted term.
    """
    dim = _check_dim(dim)
    mu, tol = _check_mu_tol(mu, tol)
    return _series_force(
        dim, mu, tol, max_terms, _terms_general(dim),
        lambda xi: _prefactor_general(dim, xi), fault=float(_fault),
    )


def force(point: DimensionlessPoint, tol: float = DEFAULT_TOL, max_terms: int = DEFAULT_MAX_TERMS) -> ForceValue:
    """Series force at a :class:`DimensionlessPoint`."""
    return force_series_general(point.dim, point.mu, tol, max_terms)


def truncation_bound(dim: int, mu: float, n0: int) -> float:
    """Upper bound on the magnitude of the terms n > n0 of the general-D force."""
    dim = _check_dim(dim)
    mu = float(mu)
    if not mu > 0.0:
        raise DomainError("truncation_bound needs mu > 0")
    if int(n0) != n0 or n0 < 1:
        raise DomainError("n0 must be an integer >= 1")
    xi = 2.0 * mu
    x = np.array([(int(n0) + 1) * xi])
    t = float(_unscale(_terms_general(dim)(x, True), x)[0])
    return abs(_prefactor_general(dim, xi)) * t / -math.expm1(-xi)
