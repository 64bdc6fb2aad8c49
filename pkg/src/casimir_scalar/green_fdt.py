"""1+1-dimensional Green functions beside a Dirichlet plate, and the force from them.

Geometry (a = hbar = c = 1 unless given): the cavity is ``|x| <= a/2``,
the plate occupies ``a/2 <= x <= a/2 + d`` and the exterior region is
``x >= a/2 + d``. Both Green functions solve
``(d^2/dx^2 + p^2) G = -delta(x - x')`` with outgoing waves and vanish on
the plate faces.

Force assembly. Each Green function is a sum of plane-wave terms
``c (i/2p) exp(i p (alpha x + beta x' + L))``; the mixed derivative at
``x = x'`` of such a term is ``-alpha beta p^2`` times the term. Expanding the
cavity prefactor ``q/(1 - q) = sum_k q^k``, ``q = exp(2 i p a)``, turns the
cavity function into images, so the net interface stress is

    d_x d_x' G_cavity(a/2) - d_x d_x' G_exterior(a/2 + d)
        = (i p / 2) sum_m c_m exp(2 i m p a)

with c_0 = 0 (bulk and nearest reflection cancel) and c_m = 4 for m >= 1.
With the one-side stress ``(1/2 pi) int d omega d_x d_x' Im G`` this gives
``f = (1/pi) sum_m int_0^inf p^2 cos(2 m p) / sqrt(p^2 + mu^2) dp``, each
integral taken as an Abel limit.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from ._numerics import EPS, richardson_table
from .errors import DomainError, ResonanceError
from .quadrature_oracle import QuadratureResult, oscillatory_cosine_integral

__all__ = [
    "Region",
    "GreenEval",
    "green_exterior",
    "green_cavity",
    "green_cavity_images",
    "interface_image_weights",
    "abel_cosine_moment",
    "force_fdt_1d",
]

RESONANCE_GAP = 1e-12
ABEL_EPS0 = 0.2
ABEL_POINTS = 7
ABEL_ORDER = 4
_MAX_IMAGES = 10_000


class Region(enum.Enum):
    CAVITY = "cavity"
    EXTERIOR = "exterior"


@dataclass(frozen=True)
class GreenEval:
    re: float
    im: float
    region: Region
    x: float
    x_prime: float
    p: complex

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)


def _check_p(p) -> complex:
    p = complex(p)
    if p.imag < 0 or (p.imag == 0 and not p.real > 0):
        raise DomainError(f"p must be positive (or in the upper half plane), got {p!r}")
    return p


def _pack(value: complex, region: Region, x, x_prime, p) -> GreenEval:
    p_out = p.real if p.imag == 0 else p
    return GreenEval(value.real, value.imag, region, float(x), float(x_prime), p_out)


def green_exterior(x: float, x_prime: float, p, *, a: float = 1.0, d: float = 1.0) -> GreenEval:
    """Green function right of the plate: direct wave minus its reflection."""
    p = _check_p(p)
    wall = 0.5 * a + d
    if x < wall or x_prime < wall:
        raise DomainError(f"exterior positions must be >= a/2 + d = {wall:g}")
    pref = 1j / (2.0 * p)
    # distances to the wall keep the reflected phase exact on the interface
    direct = cmath.exp(1j * p * abs(x - x_prime))
    reflected = cmath.exp(1j * p * ((x - wall) + (x_prime - wall)))
    return _pack(pref * (direct - reflected), Region.EXTERIOR, x, x_prime, p)


def _cavity_q(p: complex, a: float) -> complex:
    q = cmath.exp(2j * p * a)
    if abs(1.0 - q) < RESONANCE_GAP:
        raise ResonanceError(f"p a = {p * a} is on a cavity resonance")
    return q


def _check_cavity(x, x_prime, a):
    half = 0.5 * a
    if abs(x) > half or abs(x_prime) > half:
        raise DomainError(f"cavity positions must satisfy |x| <= a/2 = {half:g}")


def _cavity_bracket(x, x_prime, p, a) -> complex:
    return (
        cmath.exp(-1j * p * (x + x_prime + a))
        + cmath.exp(1j * p * (x + x_prime - a))
        - cmath.exp(-1j * p * (x - x_prime))
        - cmath.exp(1j * p * (x - x_prime))
    )


def green_cavity(x: float, x_prime: float, p, *, a: float = 1.0) -> GreenEval:
    """Cavity Green function: direct wave plus all wall reflections in closed form.

    Complex p with Im p > 0 is accepted; raises :class:`ResonanceError` when
    ``|1 - exp(2 i p a)| < 1e-12``.
    """
    p = _check_p(p)
    _check_cavity(x, x_prime, a)
    q = _cavity_q(p, a)
    pref = 1j / (2.0 * p)
    value = pref * cmath.exp(1j * p * abs(x - x_prime)) - pref * (q / (1.0 - q)) * _cavity_bracket(
        x, x_prime, p, a
    )
    return _pack(value, Region.CAVITY, x, x_prime, p)


def green_cavity_images(x: float, x_prime: float, p, *, a: float = 1.0, images: int = 50) -> GreenEval:
    """Cavity Green function with the reflection prefactor summed as ``sum_{k=1}^{images} q^k``.

    Converges to :func:`green_cavity` only when Im p > 0.
    """
    p = _check_p(p)
    _check_cavity(x, x_prime, a)
    q = cmath.exp(2j * p * a)
    series = sum(q**k for k in range(1, images + 1))
    pref = 1j / (2.0 * p)
    value = pref * cmath.exp(1j * p * abs(x - x_prime)) - pref * series * _cavity_bracket(
        x, x_prime, p, a
    )
    return _pack(value, Region.CAVITY, x, x_prime, p)


# ---------------------------------------------------------------------------
# interface bookkeeping
#
# A term is (coefficient, alpha, beta, phase(x, x'), image power k): it stands
# for coefficient * (i/2p) * q^k * exp(i p phase). The bulk term is listed
# with alpha = -beta = 1 (its mixed derivative at coincidence is +p^2).


def _cavity_terms(a: float):
    yield "bulk", 1.0, 1.0, -1.0, lambda x, xp: abs(x - xp), 0
    yield "image", -1.0, -1.0, -1.0, lambda x, xp: -(x + xp + a), 1
    yield "image", -1.0, 1.0, 1.0, lambda x, xp: x + xp - a, 1
    yield "image", 1.0, -1.0, 1.0, lambda x, xp: -(x - xp), 1
    yield "image", 1.0, 1.0, -1.0, lambda x, xp: x - xp, 1


def _exterior_terms(a: float, d: float):
    wall = 0.5 * a + d
    yield "bulk", 1.0, 1.0, -1.0, lambda x, xp: abs(x - xp), 0
    yield "reflection", -1.0, 1.0, 1.0, lambda x, xp: (x - wall) + (xp - wall), 0


def _mixed_weights(terms, x0: float, a: float):
    """Mixed-derivative weights at x = x' = x0, keyed by image order m.

    Every term evaluates to ``w (i p / 2) exp(2 i m p a)``; returns the bulk
    weight, a dict m -> weight, and the worst phase residual (the part of
    each path length that is not a multiple of 2a).
    """
    bulk = 0.0
    weights: dict[int, float] = {}
    residual = 0.0
    for kind, coeff, alpha, beta, phase, k in terms:
        w = -alpha * beta * coeff  # (i alpha p)(i beta p) / (i / 2p) -> (i p / 2) scale
        if kind == "bulk":
            bulk += w
            continue
        length = phase(x0, x0) + 2.0 * a * k  # total path length of the lowest image
        m = round(length / (2.0 * a))
        residual = max(residual, abs(length - 2.0 * a * m))
        weights[m] = weights.get(m, 0.0) + w
    return bulk, weights, residual


def interface_image_weights(a: float = 1.0, d: float = 1.0):
    """Net (cavity minus exterior) stress weights c_m and the cancellation residuals.

    Each cavity image family is a full geometric series starting at some
    lowest order m0, so it adds its weight to every m >= m0; the weights for
    m = 0 and m = 1 therefore fix all of them. The exterior contributes its
    bulk term and one reflection. Returns ``(c, bulk_residual, phase_residual)``
    where ``c[m]`` multiplies ``(i p / 2) exp(2 i m p a)``.
    """
    cav_bulk, cav, cav_res = _mixed_weights(_cavity_terms(a), 0.5 * a, a)
    ext_bulk, ext, ext_res = _mixed_weights(_exterior_terms(a, d), 0.5 * a + d, a)
    # a family whose lowest image sits at order m0 covers every m >= m0
    c = {0: 0.0, 1: 0.0}
    for m0, w in cav.items():
        for m in c:
            if m >= m0:
                c[m] += w
    for m0, w in ext.items():
        if m0 != 0:
            raise AssertionError("exterior reflection must sit at zero path length")
        c[0] -= w
    scale = abs(cav_bulk) + abs(ext_bulk)
    bulk_residual = abs(cav_bulk - ext_bulk) / scale
    return c, bulk_residual, max(cav_res, ext_res) / max(a, d)


def abel_cosine_moment(m: int, mu: float, tol: float = 1e-12):
    """Abel limit of ``int_0^inf p^2 cos(2 m p) / sqrt(p^2 + mu^2) dp``.

    Evaluated with damping exp(-eps p) on the ladder eps_k = 0.2 / 2^k and
    Richardson-extrapolated to eps = 0. Returns ``(value, error, nodes)``.
    """
    omega = 2.0 * m
    values = []
    nodes = 0
    q_err = 0.0
    for k in range(ABEL_POINTS):
        eps = ABEL_EPS0 / 2.0**k

        def g(t, eps=eps):
            return t * t * np.exp(-eps * t) / np.sqrt(t * t + mu * mu)

        r = oscillatory_cosine_integral(g, omega, tol)
        values.append(r.value)
        nodes += r.nodes_used
        q_err = max(q_err, r.abs_error_estimate)
    rows = richardson_table(values, 2.0, 1, ABEL_ORDER)
    best = rows[-1][-1]
    err = abs(best - rows[-1][-2]) + q_err
    return best, err, nodes


def force_fdt_1d(mu: float, tol: float = 1e-10, thickness: float = 1.0) -> QuadratureResult:
    """Force for D = 1 assembled from the interface Green functions.

    The plate thickness only enters the cancellation checks; the assembled
    sum depends on the image weights alone, so the result does not depend
    on ``thickness`` at all.
    """
    mu = float(mu)
    if not mu > 0.0:
        raise DomainError("force_fdt_1d needs mu > 0")
    if not thickness > 0.0:
        raise DomainError("thickness must be positive")
    c, bulk_res, phase_res = interface_image_weights(1.0, float(thickness))
    if bulk_res > 1e-12 or phase_res > 1e-12:
        raise AssertionError(
            f"interface cancellation failed (bulk {bulk_res:g}, phase {phase_res:g})"
        )
    # c[0] is exactly zero after cancellation; c[1] applies to every m >= 1
    weight = c[1] / (4.0 * math.pi)
    ratio = -math.expm1(-2.0 * mu)
    terms = []
    err = 0.0
    nodes = 0
    converged = False
    for m in range(1, _MAX_IMAGES + 1):
        value, e, n = abel_cosine_moment(m, mu)
        terms.append(weight * value)
        err += abs(weight) * e
        nodes += n
        total = math.fsum(terms)
        if abs(terms[-1]) <= tol * abs(total) * ratio:
            converged = True
            err += abs(terms[-1]) / ratio + 4 * EPS * abs(total)
            break
    return QuadratureResult(math.fsum(terms), err, nodes, converged)
