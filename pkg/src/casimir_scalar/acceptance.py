"""The ten acceptance criteria as runnable checks.

Each check returns a :class:`CriterionResult` holding the worst measured
discrepancy and its threshold. ``run_all`` is shared by ``casimir-scalar
verify`` and the test-suite.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import core, green_fdt, quadrature_oracle, specfun, units

__all__ = ["CriterionResult", "CRITERIA", "run_all", "run_criterion", "format_result"]


@dataclass(frozen=True)
class CriterionResult:
    index: int
    title: str
    passed: bool
    measured: float
    threshold: float
    seconds: float
    detail: str = ""


def _rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b)


def _finish(index, title, measured, threshold, t0, detail="", extra_ok=True):
    passed = bool(extra_ok and measured <= threshold)
    return CriterionResult(index, title, passed, float(measured), threshold, time.perf_counter() - t0, detail)


def check_massless(quick: bool = False, fault: float = 0.0) -> CriterionResult:
    t0 = time.perf_counter()
    worst_exact = max(
        _rel(core.force_massless(1).f, -math.pi / 24),
        _rel(core.force_massless(3).f, -(math.pi**2) / 480),
    )
    worst_gz = 0.0
    for dim in (2, 4, 5, 7):
        g = specfun.gamma_fn(0.5 * (dim + 1)).value
        z = specfun.zeta_fn(dim + 1.0).value
        ref = -dim * g * z / (4.0 * math.pi) ** (0.5 * (dim + 1))
        worst_gz = max(worst_gz, _rel(core.force_massless(dim).f, ref))
    return _finish(
        1, "massless closed forms", max(worst_exact / 1e-14, worst_gz / 1e-13), 1.0, t0,
        f"D=1,3 rel {worst_exact:.2e} (<=1e-14); D=2,4,5,7 rel {worst_gz:.2e} (<=1e-13); measured is the worst ratio to its bound",
    )


def check_massless_limit(quick: bool = False, fault: float = 0.0) -> CriterionResult:
    t0 = time.perf_counter()
    worst = 0.0
    for dim in (1, 2, 3, 4, 5):
        m = core.force_massless(dim).f
        worst = max(worst, _rel(core.force_series_general(dim, 1e-4).f, m))
    elapsed = time.perf_counter() - t0
    return _finish(2, "massless-limit convergence", worst, 1e-3, t0, f"runtime {elapsed:.2f} s (<5 s)", elapsed < 5.0)


def check_cross_formula(quick: bool = False, fault: float = 0.0) -> CriterionResult:
    t0 = time.perf_counter()
    worst = 0.0
    for mu in (0.1, 0.5, 1.0, 2.0, 5.0, 10.0):
        g1 = core.force_series_general(1, mu, _fault=fault).f
        g3 = core.force_series_general(3, mu, _fault=fault).f
        worst = max(worst, _rel(g1, core.force_series_1d(mu).f), _rel(g3, core.force_series_3d(mu).f))
    return _finish(3, "cross-formula identity", worst, 1e-12, t0)


def check_series_quadrature(quick: bool = False, fault: float = 0.0) -> CriterionResult:
    t0 = time.perf_counter()
    dims = (3,) if quick else (2, 3, 5)
    mus = (1.0,) if quick else (0.5, 1.0, 2.0, 5.0)
    worst = 0.0
    ok = True
    for dim in dims:
        for mu in mus:
            q = quadrature_oracle.force_quadrature_general(dim, mu)
            ok &= q.converged
            worst = max(worst, _rel(core.force_series_general(dim, mu).f, q.value))
    for mu in ((1.0,) if quick else (0.5, 1.0, 2.0)):
        q = quadrature_oracle.force_quadrature_1d(mu)
        ok &= q.converged
        worst = max(worst, _rel(core.force_series_1d(mu).f, q.value))
    elapsed = time.perf_counter() - t0
    return _finish(4, "series vs quadrature", worst, 1e-8, t0, f"runtime {elapsed:.2f} s (<60 s)", ok and elapsed < 60.0)


def check_fdt(quick: bool = False, fault: float = 0.0) -> CriterionResult:
    t0 = time.perf_counter()
    worst = 0.0
    ok = True
    for mu in ((1.0,) if quick else (0.5, 1.0, 2.0)):
        r = green_fdt.force_fdt_1d(mu)
        ok &= r.converged
        worst = max(worst, _rel(r.value, core.force_series_1d(mu).f))
    elapsed = time.perf_counter() - t0
    return _finish(5, "FDT route", worst, 1e-6, t0, f"runtime {elapsed:.2f} s (<30 s)", ok and elapsed < 30.0)


def check_mode_sum(quick: bool = False, fault: float = 0.0) -> CriterionResult:
    t0 = time.perf_counter()
    worst = 0.0
    for mu in ((1.0,) if quick else (0.5, 1.0, 2.0)):
        ladder = quadrature_oracle.mode_sum_ladder(mu)
        worst = max(worst, _rel(ladder.extrapolated, core.force_series_1d(mu).f))
    return _finish(6, "mode-sum route", worst, 1e-3, t0)


def _one_sided_slope(f: Callable[[float], complex], x0: float, h: float, direction: int) -> complex:
    # fourth-order one-sided first derivative
    c = (-25.0, 48.0, -36.0, 16.0, -3.0)
    return sum(ck * f(x0 + direction * k * h) for k, ck in enumerate(c)) / (12.0 * h) * direction


def green_structure_samples(n: int = 100, seed: int = 20240611):
    """Worst Dirichlet, reciprocity and jump discrepancies over random samples.

    Momenta avoid the cavity poles by |1 - exp(2 i p a)| >= 0.5.
    """
    rng = np.random.default_rng(seed)
    a, d = 1.0, 1.0
    wall = 0.5 * a + d
    h = 1e-3
    dirichlet = recip = jump = 0.0
    count = 0
    while count < n:
        p = float(rng.uniform(0.5, 5.0))
        if abs(1.0 - np.exp(2j * p * a)) < 0.5:
            continue
        count += 1
        xc, xc2 = rng.uniform(-0.45, 0.45, size=2)
        xe, xe2 = wall + rng.uniform(0.05, 3.0, size=2)
        # Dirichlet on both faces of the cavity and on the exterior face
        for g in (
            green_fdt.green_cavity(0.5 * a, xc, p, a=a),
            green_fdt.green_cavity(-0.5 * a, xc, p, a=a),
            green_fdt.green_exterior(wall, xe, p, a=a, d=d),
        ):
            dirichlet = max(dirichlet, abs(g.value) * p / 1e-14)
        recip = max(
            recip,
            abs(green_fdt.green_cavity(xc, xc2, p, a=a).value - green_fdt.green_cavity(xc2, xc, p, a=a).value),
            abs(green_fdt.green_exterior(xe, xe2, p, a=a, d=d).value - green_fdt.green_exterior(xe2, xe, p, a=a, d=d).value),
        )
        for region_fn, src in (
            (lambda x, s: green_fdt.green_cavity(x, s, p, a=a).value, xc),
            (lambda x, s: green_fdt.green_exterior(x, s, p, a=a, d=d).value, xe),
        ):
            f = lambda x, s=src, fn=region_fn: fn(x, s)  # noqa: E731
            step = _one_sided_slope(f, src, h, +1) - _one_sided_slope(f, src, h, -1)
            jump = max(jump, abs(step + 1.0))
    return dirichlet, recip, jump


def check_green_structure(quick: bool = False, fault: float = 0.0) -> CriterionResult:
    t0 = time.perf_counter()
    dirichlet, recip, jump = green_structure_samples(100)
    measured = max(dirichlet, recip / 1e-12, jump / 1e-6)
    return _finish(
        7, "Green-function structure", measured, 1.0, t0,
        f"|G| p / 1e-14 = {dirichlet:.2e}; reciprocity {recip:.2e} (<=1e-12); jump {jump:.2e} (<=1e-6); measured is the worst ratio to its bound",
    )


def special_function_errors(quick: bool = False):
    """Worst oracle, recurrence and half-integer discrepancies."""
    nus = (0.0, 0.5, 1.0, 2.0, 3.0, 7.0) if quick else (0.0, 0.3, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.5, 6.2, 8.0, 10.0)
    xs = np.geomspace(1e-3, 60.0, 6 if quick else 15)
    oracle = 0.0
    for nu in nus:
        for x in xs:
            ref = specfun.bessel_k_oracle(nu, x)
            oracle = max(oracle, _rel(specfun.bessel_k(nu, x).value, ref))
    recurrence = 0.0
    for nu in (1.0, 1.5, 2.0, 2.5, 3.0):
        for x in np.geomspace(1e-3, 50.0, 40):
            kp = specfun.bessel_k(nu + 1, x).value
            km = specfun.bessel_k(nu - 1, x).value
            k = specfun.bessel_k(nu, x).value
            recurrence = max(recurrence, abs(kp - km - 2 * nu / x * k) / kp)
    half = 0.0
    for x in np.geomspace(1e-3, 100.0, 40):
        e = math.exp(-x) * math.sqrt(math.pi / (2 * x))
        closed = {0.5: e, 1.5: e * (1 + 1 / x), 2.5: e * (1 + 3 / x + 3 / x**2)}
        for nu, ref in closed.items():
            half = max(half, _rel(specfun.bessel_k(nu, x).value, ref))
    return oracle, recurrence, half


def check_special_functions(quick: bool = False, fault: float = 0.0) -> CriterionResult:
    t0 = time.perf_counter()
    oracle, recurrence, half = special_function_errors(quick)
    measured = max(oracle / 1e-12, recurrence / 1e-11, half / 1e-13)
    return _finish(
        8, "special functions", measured, 1.0, t0,
        f"oracle {oracle:.2e} (<=1e-12); recurrence {recurrence:.2e} (<=1e-11); half-integer {half:.2e} (<=1e-13); measured is the worst ratio to its bound",
    )


def check_units(quick: bool = False, fault: float = 0.0) -> CriterionResult:
    t0 = time.perf_counter()
    inp = units.PhysicalInput(separation=1e-6, mass=0.0, dim=3)
    point = units.reduce(inp)
    pressure = units.to_physical(core.force_series_general(3, point.mu), inp).pressure
    return _finish(9, "physical-units spot check", _rel(pressure, -6.50e-4), 5e-3, t0, f"pressure {pressure:.6e} N/m^2")


def check_screening(quick: bool = False, fault: float = 0.0) -> CriterionResult:
    t0 = time.perf_counter()
    worst_ratio = 0.0
    monotone = True
    for dim in (1, 3):
        mags = [abs(core.force_series_general(dim, mu).f) for mu in (0.0, 0.5, 1.0, 2.0, 5.0, 10.0)]
        monotone &= all(b < a for a, b in zip(mags, mags[1:]))
        worst_ratio = max(worst_ratio, mags[-1] / mags[0])
    return _finish(
        10, "mass screening", worst_ratio, 1e-6, t0,
        f"strictly decreasing: {monotone}", monotone,
    )


CRITERIA = (
    check_massless,
    check_massless_limit,
    check_cross_formula,
    check_series_quadrature,
    check_fdt,
    check_mode_sum,
    check_green_structure,
    check_special_functions,
    check_units,
    check_screening,
)


def run_criterion(index: int, quick: bool = False, fault: float = 0.0) -> CriterionResult:
    return CRITERIA[index - 1](quick=quick, fault=fault)


def run_all(quick: bool = False, fault: float = 0.0) -> list[CriterionResult]:
    return [check(quick=quick, fault=fault) for check in CRITERIA]


def format_result(r: CriterionResult) -> str:
    status = "PASS" if r.passed else "FAIL"
    line = f"{status} {r.index:2d} {r.title}: measured={r.measured:.3e} threshold={r.threshold:.1e} ({r.seconds:.2f} s)"
    if r.detail:
        line += f" [{r.detail}]"
    return line
