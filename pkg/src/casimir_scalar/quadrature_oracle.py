"""Independent numerical routes to the Casimir force.

Nothing here calls the closed-form Bessel series of :mod:`core`. Units are
a = hbar = c = 1 throughout.

Routes:

* 1-D Poisson form: ``f = -(1/4) sum_n d^2/dn^2 I(n)`` with the oscillatory
  integral ``I(n) = int_0^inf cos(2 pi n x) / sqrt((pi x)^2 + mu^2) dx``,
  differentiated numerically in a continuous n.
* D-dimensional form: the transverse momentum integral reduced to a radial
  one, ``R(n) = int_0^inf q^(D-2) K_0(2 n sqrt(q^2 + mu^2)) dq``, and
  ``f = S_{D-2} / (2 pi)^(D-1) sum_n [-(1/(4 pi)) R''(n)]``.
* Abel-regulated mode sum over the cavity spectrum p_n = n pi, extrapolated
  to zero regulator.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ._numerics import (
    EPS,
    adaptive_gauss_kronrod,
    gauss_legendre,
    iterated_average,
    richardson_table,
    second_derivative,
)
from .errors import DomainError, ExtrapolationWarning
from .specfun import bessel_k_array, gamma_fn

__all__ = [
    "QuadratureResult",
    "RegulatorLadder",
    "oscillatory_cosine_integral",
    "inner_integral_1d",
    "force_quadrature_1d",
    "radial_integral",
    "force_quadrature_general",
    "solid_angle",
    "mode_sum_regulated",
    "mode_sum_continuum",
    "mode_sum_ladder",
    "extrapolate_ladder",
]

OSC_PANELS = 64
OSC_LEVELS = 32
OSC_ORDER = 48
FD_STEP = 1e-2
FD_LEVELS = 2
MODESUM_LAMBDA0 = 0.5
MODESUM_POINTS = 7
MODESUM_ORDER = 4
_MAX_N = 10_000


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    nodes_used: int
    converged: bool


@dataclass(frozen=True)
class RegulatorLadder:
    """Regulated values on a halving ladder of regulator strengths."""

    lambdas: tuple[float, ...]
    values: tuple[float, ...]
    extrapolated: float = math.nan
    error_estimate: float = math.nan


# ---------------------------------------------------------------------------
# oscillatory integrals


def _panel_edges(panels: int) -> np.ndarray:
    # zeros of cos(u) at (2k+1) pi/2, plus the origin
    return np.concatenate([[0.0], (2.0 * np.arange(panels) + 1.0) * (0.5 * math.pi)])


def _panel_integrals(g, panels: int, order: int) -> np.ndarray:
    """Per-panel integrals of cos(u) g(u); g may return extra trailing axes."""
    edges = _panel_edges(panels)
    x, w = gauss_legendre(order)
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    u = 0.5 * (lo + hi)[:, None] + half[:, None] * x[None, :]
    vals = np.asarray(g(u.ravel()), dtype=float)
    vals = vals.reshape(u.shape + vals.shape[1:])
    extra = (1,) * (vals.ndim - 2)
    weighted = np.cos(u).reshape(u.shape + extra) * vals
    return np.einsum("q,pq...->p...", w, weighted) * half.reshape(half.shape + extra)


def _osc_core(g, panels: int, levels: int, order: int):
    """Integral of cos(u) g(u) over [0, inf) for each trailing component of g.

    Panel sums alternate in sign; their partial sums are accelerated by
    iterated averaging. Error = averaging increment + panel rule error
    (order vs. order/2) + rounding floor.
    """
    fine = _panel_integrals(g, panels, order)
    coarse = _panel_integrals(g, panels, order // 2)
    flat = fine.reshape(fine.shape[0], -1)
    partial = np.cumsum(flat, axis=0)
    values = np.empty(flat.shape[1])
    errors = np.empty(flat.shape[1])
    rule_err = np.abs(fine - coarse).reshape(flat.shape).sum(axis=0)
    scale = np.abs(flat).sum(axis=0)
    for j in range(flat.shape[1]):
        v, e = iterated_average(partial[:, j], levels)
        # same transform on a window one panel shorter
        v2, _ = iterated_average(partial[:-1, j], levels)
        values[j] = v
        errors[j] = max(e, abs(v - v2)) + rule_err[j] + 16 * EPS * scale[j]
    shape = fine.shape[1:]
    nodes = (order + order // 2) * panels
    return values.reshape(shape), errors.reshape(shape), nodes


def oscillatory_cosine_integral(
    g: Callable[[np.ndarray], np.ndarray],
    omega: float,
    tol: float = 1e-10,
    *,
    panels: int = OSC_PANELS,
    levels: int = OSC_LEVELS,
    order: int = OSC_ORDER,
) -> QuadratureResult:
    """``int_0^inf g(t) cos(omega t) dt`` for slowly varying, non-integrable-ish g.

    The substitution u = omega t puts the cosine zeros at fixed positions,
    so the rule depends smoothly on omega. Works for g decaying like 1/t and,
    in the Abel/Euler sense, for g growing polynomially.
    """
    omega = abs(float(omega))
    if omega == 0.0:
        raise DomainError("omega must be nonzero")
    val, err, nodes = _osc_core(lambda u: g(u / omega), panels, levels, order)
    val, err = float(val) / omega, float(err) / omega
    return QuadratureResult(val, err, nodes, err <= max(tol, tol * abs(val)))


def _inner_values(ns: np.ndarray, mu: float):
    """I(n) for an array of real n (sign ignored, the integrand is even in n)."""
    omegas = 2.0 * math.pi * np.abs(np.asarray(ns, dtype=float))

    def g(u):
        x = u[:, None] / omegas[None, :]
        return 1.0 / (np.sqrt((math.pi * x) ** 2 + mu * mu) * omegas[None, :])

    val, err, nodes = _osc_core(g, OSC_PANELS, OSC_LEVELS, OSC_ORDER)
    return val, err, nodes * omegas.size


def inner_integral_1d(n: float, mu: float, tol: float = 1e-10) -> QuadratureResult:
    """``int_0^inf cos(2 pi n x) / sqrt((pi x)^2 + mu^2) dx``; equals K_0(2 n mu)/pi."""
    n, mu = float(n), float(mu)
    if not n >= 1.0 or not mu > 0.0:
        raise DomainError("inner_integral_1d needs n >= 1 and mu > 0")
    val, err, nodes = _inner_values(np.array([n]), mu)
    v, e = float(val[0]), float(err[0])
    return QuadratureResult(v, e, nodes, e <= tol)


def _sum_second_derivatives(curve, mu: float, tol: float, prefactor: float):
    """``prefactor * sum_n d^2/dn^2 curve(n)``, stopping on a geometric tail test.

    The n-terms decay like e^(-2 n mu), so once a term falls below
    ``tol |sum| (1 - e^-2mu)`` the remainder is below tol relative.
    """
    ratio = -math.expm1(-2.0 * mu)
    terms: list[float] = []
    err_total = 0.0
    nodes = 0
    converged = False
    for n in range(1, _MAX_N + 1):
        d2, d2_err, npts = second_derivative(curve, float(n), FD_STEP, FD_LEVELS)
        term = prefactor * d2
        terms.append(term)
        err_total += abs(prefactor) * d2_err
        nodes += npts
        total = math.fsum(terms)
        if abs(term) <= tol * abs(total) * ratio:
            converged = True
            err_total += abs(term) / ratio
            break
    return math.fsum(terms), err_total, nodes, converged


def force_quadrature_1d(mu: float, tol: float = 1e-10) -> QuadratureResult:
    """Force for D = 1 from numerically differentiated oscillatory integrals."""
    mu = float(mu)
    if not mu > 0.0:
        raise DomainError("force_quadrature_1d needs mu > 0")
    calls = [0]

    def curve(ns):
        val, _, nodes = _inner_values(ns, mu)
        calls[0] += nodes
        return val

    value, err, _, converged = _sum_second_derivatives(curve, mu, tol, -0.25)
    return QuadratureResult(value, err, calls[0], converged)


# ---------------------------------------------------------------------------
# radial integral for D >= 2


def _radial_cutoff(dim: int, n_min: float, mu: float) -> float:
    """Upper q limit where q^(D-2) K_0(...) has fallen e^-50 below its size at q = 0."""
    q = 1.0
    while True:
        drop = 2.0 * n_min * (math.sqrt(q * q + mu * mu) - mu) - (dim - 2) * math.log(max(q, 1.0))
        if drop > 50.0:
            return q
        q *= 1.5


def _radial_values(dim: int, ns: np.ndarray, mu: float, tol: float):
    """R(n) for an array of n on one shared set of quadrature intervals."""
    ns = np.asarray(ns, dtype=float)
    q_max = _radial_cutoff(dim, float(ns.min()), mu)
    q_half = 1.0 / (2.0 * float(ns.min()))  # decay length of K_0(2 n q)

    def integrand(q):
        r = np.sqrt(q * q + mu * mu)
        arg = 2.0 * r[:, None] * ns[None, :]
        k0 = bessel_k_array(0.0, arg)
        return (q ** (dim - 2))[:, None] * k0

    breaks = np.arange(0.0, q_max, q_half)
    val, err, nodes, converged = adaptive_gauss_kronrod(
        integrand, 0.0, q_max, rtol=tol, breakpoints=breaks
    )
    return np.atleast_1d(val), np.atleast_1d(err), nodes, converged


def radial_integral(dim: int, n: float, mu: float, tol: float = 1e-12) -> QuadratureResult:
    """``int_0^inf q^(D-2) K_0(2 n sqrt(q^2 + mu^2)) dq``."""
    if int(dim) != dim or dim < 2:
        raise DomainError("radial_integral needs an integer dim >= 2")
    n, mu = float(n), float(mu)
    if not n > 0.0 or not mu > 0.0:
        raise DomainError("radial_integral needs n > 0 and mu > 0")
    val, err, nodes, converged = _radial_values(int(dim), np.array([n]), mu, tol)
    v, e = float(val[0]), float(err[0])
    return QuadratureResult(v, e, nodes, converged and e <= tol * abs(v))


def solid_angle(dim: int) -> float:
    """Surface area of the unit sphere in D - 1 dimensions, 2 pi^((D-1)/2) / Gamma((D-1)/2)."""
    k = dim - 1
    return 2.0 * math.pi ** (0.5 * k) / gamma_fn(0.5 * k).value


def force_quadrature_general(dim: int, mu: float, tol: float = 1e-10) -> QuadratureResult:
    """Force for 2 <= D <= 10 from the radial integral, differentiated in n."""
    if int(dim) != dim or not (2 <= dim <= 10):
        raise DomainError("force_quadrature_general needs an integer dim in [2, 10]")
    dim = int(dim)
    mu = float(mu)
    if not mu > 0.0:
        raise DomainError("force_quadrature_general needs mu > 0")
    calls = [0]

    def curve(ns):
        val, _, nodes, _ = _radial_values(dim, ns, mu, 1e-14)
        calls[0] += nodes
        return val

    pre = solid_angle(dim) / (2.0 * math.pi) ** (dim - 1) * (-1.0 / (4.0 * math.pi))
    value, err, _, converged = _sum_second_derivatives(curve, mu, tol, pre)
    return QuadratureResult(value, err, calls[0], converged)


# ---------------------------------------------------------------------------
# Abel-regulated mode sum


def mode_sum_continuum(mu: float, lam: float) -> float:
    """``(1/(2 pi)) int_0^inf (p^2/omega) e^(-lam omega) dp`` by adaptive quadrature."""
    mu, lam = float(mu), float(lam)
    if not lam > 0.0:
        raise DomainError("regulator lambda must be positive")
    # the integrand peaks near p ~ 1/lam and is e^-60 below its peak by p_max
    p_max = (60.0 + 2.0 * math.log1p(1.0 / lam)) / lam + mu
    breaks = np.linspace(0.0, p_max, 33)

    def integrand(p):
        w = np.sqrt(p * p + mu * mu)
        return p * p / w * np.exp(-lam * w)

    val, _, _, _ = adaptive_gauss_kronrod(integrand, 0.0, p_max, rtol=1e-15, breakpoints=breaks)
    return val / (2.0 * math.pi)


def mode_sum_regulated(mu: float, lam: float, n_max: int | None = None) -> float:
    """``S(lam) = (1/2) sum_n (p_n^2/omega_n) e^(-lam omega_n) - continuum``, p_n = n pi."""
    mu, lam = float(mu), float(lam)
    if not lam > 0.0:
        raise DomainError("regulator lambda must be positive")
    if not mu >= 0.0:
        raise DomainError("mu must be >= 0")
    # e^(-lam omega_n) < 1e-18 once lam n pi > 41.5
    needed = int(math.ceil(41.5 / (lam * math.pi))) + 1
    if n_max is None:
        n_max = needed
    elif n_max < needed:
        raise DomainError(f"n_max={n_max} too small for lambda={lam:g}; need {needed}")
    p = math.pi * np.arange(1, n_max + 1, dtype=float)
    w = np.sqrt(p * p + mu * mu)
    discrete = 0.5 * math.fsum(p * p / w * np.exp(-lam * w))
    return discrete - mode_sum_continuum(mu, lam)


def _check_ladder(lambdas: Sequence[float], values: Sequence[float]) -> None:
    if len(lambdas) != len(values):
        raise DomainError("ladder lambdas and values differ in length")
    if len(lambdas) < 4:
        raise DomainError("ladder needs at least 4 points")
    for a, b in zip(lambdas, lambdas[1:]):
        if not (a > 0 and abs(b - 0.5 * a) <= 1e-12 * a):
            raise DomainError("ladder must halve at every step")


def _richardson_limit(values: Sequence[float], order: int) -> tuple[float, float]:
    rows = richardson_table(values, 2.0, 1, order)
    best = rows[-1][-1]
    err = abs(best - rows[-1][-2])
    # successive diagonal extrapolants should contract
    last = [row[-1] for row in rows[-3:]]
    d1, d2 = abs(last[1] - last[0]), abs(last[2] - last[1])
    floor = 1e3 * EPS * max(1.0, abs(best))
    if d2 > d1 and d2 > floor:
        warnings.warn(
            f"extrapolants diverge (increments {d1:.3g} then {d2:.3g})",
            ExtrapolationWarning,
            stacklevel=3,
        )
    return best, err


def extrapolate_ladder(ladder: RegulatorLadder, order: int = MODESUM_ORDER) -> float:
    """Limit lambda -> 0 of a halving ladder by Richardson extrapolation in lambda."""
    _check_ladder(ladder.lambdas, ladder.values)
    return _richardson_limit(ladder.values, min(order, len(ladder.values) - 1))[0]


def mode_sum_ladder(
    mu: float,
    lam0: float = MODESUM_LAMBDA0,
    points: int = MODESUM_POINTS,
    order: int = MODESUM_ORDER,
) -> RegulatorLadder:
    """Regulated mode sums at lam0 / 2^k and their extrapolated limit."""
    lambdas = tuple(lam0 / 2.0**k for k in range(points))
    values = tuple(mode_sum_regulated(mu, lam) for lam in lambdas)
    _check_ladder(lambdas, values)
    best, err = _richardson_limit(values, min(order, points - 1))
    return RegulatorLadder(lambdas, values, best, err)
