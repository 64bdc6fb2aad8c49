"""Command-line front end.

Subcommands::

    casimir-scalar force  --dim 3 --mu 0.5 --method series,quadrature
    casimir-scalar sweep  --dim 3 --axis mu --start 0 --stop 10 --steps 21
    casimir-scalar verify [--quick]

Exit codes: 0 success, 1 verification failure, 2 invalid flags,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import shlex
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import acceptance, core, green_fdt, quadrature_oracle, units
from .errors import DomainError, ToleranceNotMet

COLUMNS = ("dim", "mu", "xi", "method", "f", "pressure_si", "err", "terms", "ms")
METHODS = ("series", "quadrature", "modesum", "green", "massless")
DIM1_ONLY = ("modesum", "green")

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NONCONVERGED = 0, 1, 2, 3

_LENGTH_UNITS = {"m": 1.0, "cm": 1e-2, "mm": 1e-3, "um": 1e-6, "µm": 1e-6, "nm": 1e-9, "pm": 1e-12, "fm": 1e-15}
_MASS_UNITS = {
    "kg": (1.0, units.MassUnit.KG),
    "g": (1e-3, units.MassUnit.KG),
    "eV": (1.0, units.MassUnit.EV),
    "keV": (1e3, units.MassUnit.EV),
    "MeV": (1e6, units.MassUnit.EV),
    "GeV": (1e9, units.MassUnit.EV),
}
_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-zµ]*)\s*$")


class UsageError(Exception):
    """Invalid flag combination; reported with exit code 2."""


class NonConvergence(Exception):
    """A method did not reach its tolerance; reported with exit code 3."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # one-line diagnostic, exit 2
        raise UsageError(message)


@dataclass(frozen=True)
class OutputRow:
    dim: int
    mu: float
    xi: float
    method: str
    f: float
    pressure_si: float | None
    err: float | None
    terms: int | None
    ms: float | None = None

    def cells(self):
        return [getattr(self, c) for c in COLUMNS]


@dataclass(frozen=True)
class Point:
    """One evaluation point: reduced mass plus, optionally, the SI pressure scale."""

    dim: int
    mu: float
    scale: float | None = None


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    start: float
    stop: float
    steps: int
    log_spacing: bool
    dim: int
    methods: tuple[str, ...]

    def values(self) -> np.ndarray:
        if self.log_spacing:
            return np.geomspace(self.start, self.stop, self.steps)
        return np.linspace(self.start, self.stop, self.steps)


# ---------------------------------------------------------------------------
# parsing helpers


def _quantity(text: str, table: dict, default_unit: str):
    m = _QUANTITY.match(text)
    if not m:
        raise UsageError(f"cannot parse quantity {text!r}")
    value, unit = float(m.group(1)), m.group(2) or default_unit
    if unit not in table:
        raise UsageError(f"unknown unit {unit!r} in {text!r}; expected one of {', '.join(table)}")
    return value, table[unit]


def parse_length(text: str, natural: bool = False) -> float:
    if natural:
        return _plain(text)
    value, factor = _quantity(text, _LENGTH_UNITS, "m")
    return value * factor


def parse_mass(text: str, natural: bool = False) -> tuple[float, units.MassUnit]:
    if natural:
        return _plain(text), units.MassUnit.KG
    value, (factor, unit) = _quantity(text, _MASS_UNITS, "kg")
    return value * factor, unit


def _plain(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"expected a number, got {text!r}") from None


def _methods(text: str) -> tuple[str, ...]:
    methods = tuple(m.strip() for m in text.split(",") if m.strip())
    if not methods:
        raise UsageError("--method needs at least one method")
    for m in methods:
        if m not in METHODS:
            raise UsageError(f"unknown method {m!r}; choose from {', '.join(METHODS)}")
    return methods


def _check_methods(dim: int, methods: Sequence[str]) -> None:
    for m in methods:
        if m in DIM1_ONLY and dim != 1:
            raise UsageError(f"method {m!r} is only available for --dim 1")
        if m == "quadrature" and dim > 10:
            raise UsageError("method 'quadrature' supports --dim up to 10")


def expand_args_file(argv: Sequence[str]) -> list[str]:
    """Replace ``--args-file PATH`` with the flags listed in PATH, one per line."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok == "--args-file" or tok.startswith("--args-file="):
            path = tok.split("=", 1)[1] if "=" in tok else next(it, None)
            if path is None:
                raise UsageError("--args-file needs a path")
            try:
                with open(path, encoding="utf-8") as fh:
                    lines = fh.read().splitlines()
            except OSError as exc:
                raise UsageError(f"cannot read args file: {exc}") from None
            for line in lines:
                line = line.strip()
                if line and not line.startswith("#"):
                    out.extend(shlex.split(line))
        else:
            out.append(tok)
    return out


# ---------------------------------------------------------------------------
# evaluation


def _validate_mu(method: str, mu: float) -> None:
    if mu == 0.0 and method in ("quadrature", "green"):
        raise UsageError(f"method {method!r} needs mu > 0")


def evaluate(point: Point, method: str, tol: float, max_terms: int) -> OutputRow:
    """One row for one method at one point. Raises NonConvergence on failure."""
    dim, mu = point.dim, point.mu
    try:
        if method in ("series", "massless"):
            fv = core.force_massless(dim) if method == "massless" else core.force_series_general(dim, mu, tol, max_terms)
            label = "massless" if method == "massless" or mu == 0.0 else "series"
            f, err, terms = fv.f, fv.abs_error, fv.diagnostics.terms_used
        elif method == "quadrature":
            q = (
                quadrature_oracle.force_quadrature_1d(mu, max(tol, 1e-10))
                if dim == 1
                else quadrature_oracle.force_quadrature_general(dim, mu, max(tol, 1e-10))
            )
            if not q.converged:
                raise NonConvergence(f"quadrature did not converge at dim={dim}, mu={mu:g}")
            label, f, err, terms = method, q.value, q.abs_error_estimate, q.nodes_used
        elif method == "green":
            q = green_fdt.force_fdt_1d(mu, max(tol, 1e-10))
            if not q.converged:
                raise NonConvergence(f"Green-function route did not converge at mu={mu:g}")
            label, f, err, terms = method, q.value, q.abs_error_estimate, q.nodes_used
        elif method == "modesum":
            ladder = quadrature_oracle.mode_sum_ladder(mu)
            label, f, err = method, ladder.extrapolated, ladder.error_estimate
            terms = sum(int(math.ceil(41.5 / (lam * math.pi))) + 1 for lam in ladder.lambdas)
        else:  # pragma: no cover - methods are validated at parse time
            raise UsageError(f"unknown method {method!r}")
    except ToleranceNotMet as exc:
        raise NonConvergence(str(exc)) from None
    pressure = None if point.scale is None else f * point.scale
    return OutputRow(dim, mu, 2.0 * mu, label, f, pressure, err, terms)


def _evaluate_timed(job):
    point, method, tol, max_terms, timing = job
    t0 = time.perf_counter()
    row = evaluate(point, method, tol, max_terms)
    if timing:
        row = OutputRow(*row.cells()[:-1], ms=(time.perf_counter() - t0) * 1e3)
    return row


def run_jobs(points: Sequence[Point], methods: Sequence[str], tol: float, max_terms: int, timing: bool, jobs: int = 1):
    """Evaluate every (point, method) pair; results come back in input order."""
    work = [(pt, m, tol, max_terms, timing) for pt in points for m in methods]
    if jobs <= 1 or len(work) <= 1:
        return [_evaluate_timed(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_evaluate_timed, work))


# ---------------------------------------------------------------------------
# output


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    if isinstance(value, str):
        return value
    return f"{float(value):.17g}"


def write_rows(rows: Sequence[OutputRow], fmt: str, out) -> None:
    if fmt == "csv":
        out.write(",".join(COLUMNS) + "\n")
        for r in rows:
            out.write(",".join(_fmt(v) for v in r.cells()) + "\n")
    else:
        for r in rows:
            obj = {}
            for c, v in zip(COLUMNS, r.cells()):
                if v is None or isinstance(v, str):
                    obj[c] = v
                elif isinstance(v, (int, np.integer)):
                    obj[c] = int(v)
                else:
                    obj[c] = float(v)
            out.write(json.dumps(obj) + "\n")


# ---------------------------------------------------------------------------
# subcommands


def _physical_point(dim: int, separation: float, mass: float, mass_unit, natural: bool, thickness: float = 0.0) -> Point:
    try:
        inp = units.PhysicalInput(
            separation=separation,
            mass=mass,
            dim=dim,
            unit_system=units.UnitSystem.NATURAL if natural else units.UnitSystem.SI,
            mass_unit=mass_unit,
            thickness=thickness,
        )
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    mu = units.reduce(inp).mu
    scale = None if natural else units.pressure_scale(separation, dim)
    return Point(dim, mu, scale)


def _common_checks(args) -> None:
    if args.dim < 1 or args.dim > core.DIM_MAX:
        raise UsageError(f"--dim must lie in [1, {core.DIM_MAX}]")
    if not (args.tol > 0.0):
        raise UsageError("--tol must be positive")
    if args.max_terms < 1:
        raise UsageError("--max-terms must be >= 1")


def cmd_force(args, out) -> int:
    _common_checks(args)
    methods = _methods(args.method)
    _check_methods(args.dim, methods)
    natural = args.units == "natural"
    if args.mu is not None:
        if args.separation is not None or args.mass is not None:
            raise UsageError("give either --mu or --separation with --mass, not both")
        if not (args.mu >= 0.0) or not math.isfinite(args.mu):
            raise UsageError("--mu must be finite and >= 0")
        point = Point(args.dim, float(args.mu))
    else:
        if args.separation is None or args.mass is None:
            raise UsageError("give either --mu or both --separation and --mass")
        mass, mass_unit = parse_mass(args.mass, natural)
        point = _physical_point(args.dim, parse_length(args.separation, natural), mass, mass_unit, natural)
    for m in methods:
        _validate_mu(m, point.mu)
    rows = run_jobs([point], methods, args.tol, args.max_terms, args.timing)
    write_rows(rows, args.format, out)
    return EXIT_OK


def build_sweep(args) -> tuple[SweepSpec, list[Point]]:
    natural = args.units == "natural"
    methods = _methods(args.method)
    _check_methods(args.dim, methods)
    if args.steps < 2:
        raise UsageError("--steps must be >= 2")
    if args.axis == "mu":
        start, stop = _plain(args.start), _plain(args.stop)
    elif args.axis == "separation":
        start, stop = parse_length(args.start, natural), parse_length(args.stop, natural)
    else:
        start, fixed_unit = parse_mass(args.start, natural)
        stop, stop_unit = parse_mass(args.stop, natural)
        if stop_unit is not fixed_unit:
            raise UsageError("--start and --stop must use the same kind of mass unit")
    if not start < stop:
        raise UsageError("--start must be smaller than --stop")
    if start < 0:
        raise UsageError("sweep values must be >= 0")
    if args.log and start <= 0:
        raise UsageError("--log needs a positive --start")
    spec = SweepSpec(args.axis, start, stop, args.steps, args.log, args.dim, methods)
    points: list[Point] = []
    for v in spec.values():
        v = float(v)
        if args.axis == "mu":
            points.append(Point(args.dim, v))
        elif args.axis == "separation":
            if args.mass is None:
                raise UsageError("a separation sweep needs --mass")
            mass, mass_unit = parse_mass(args.mass, natural)
            if v <= 0:
                raise UsageError("separation must be positive")
            points.append(_physical_point(args.dim, v, mass, mass_unit, natural))
        else:
            if args.separation is None:
                raise UsageError("a mass sweep needs --separation")
            points.append(_physical_point(args.dim, parse_length(args.separation, natural), v, fixed_unit, natural))
    for pt in points:
        for m in methods:
            _validate_mu(m, pt.mu)
    return spec, points


def cmd_sweep(args, out) -> int:
    _common_checks(args)
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    _, points = build_sweep(args)
    rows = run_jobs(points, _methods(args.method), args.tol, args.max_terms, args.timing, args.jobs)
    write_rows(rows, args.format, out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    failed = 0
    for check in acceptance.CRITERIA:
        result = check(quick=args.quick, fault=args.inject_fault)
        out.write(acceptance.format_result(result) + "\n")
        out.flush()
        failed += not result.passed
    total = len(acceptance.CRITERIA)
    out.write(f"{total - failed}/{total} criteria passed\n")
    return EXIT_OK if failed == 0 else EXIT_VERIFY


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dim", type=int, required=True, help="spatial dimension D")
    p.add_argument("--method", default="series", help=f"comma-separated subset of {','.join(METHODS)}")
    p.add_argument("--tol", type=float, default=core.DEFAULT_TOL, help="relative tolerance (default 1e-12)")
    p.add_argument("--max-terms", type=int, default=core.DEFAULT_MAX_TERMS, help="series term budget")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--units", choices=("natural", "si"), default="si",
                   help="interpretation of --separation/--mass (natural: hbar = c = 1)")
    p.add_argument("--timing", action="store_true", help="fill the ms column (output is then not reproducible)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="casimir-scalar", description="Casimir pressure of a massive scalar field between Dirichlet plates.")
    parser.add_argument("--args-file", metavar="PATH", help="read additional flags from PATH, one per line")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    pf = sub.add_parser("force", help="evaluate one point")
    _add_common(pf)
    pf.add_argument("--mu", type=float, help="reduced mass m c a / hbar")
    pf.add_argument("--separation", help="plate separation, e.g. 1um (SI) or a plain number (natural)")
    pf.add_argument("--mass", help="field mass, e.g. 0.511MeV or 9.1e-31kg")

    ps = sub.add_parser("sweep", help="evaluate along one axis")
    _add_common(ps)
    ps.add_argument("--axis", choices=("mu", "separation", "mass"), default="mu")
    ps.add_argument("--start", required=True)
    ps.add_argument("--stop", required=True)
    ps.add_argument("--steps", type=int, required=True)
    ps.add_argument("--log", action="store_true", help="logarithmic spacing")
    ps.add_argument("--separation", help="fixed separation for a mass sweep")
    ps.add_argument("--mass", help="fixed mass for a separation sweep")
    ps.add_argument("--jobs", type=int, default=1, help="worker processes")

    pv = sub.add_parser("verify", help="run the acceptance criteria")
    pv.add_argument("--quick", action="store_true", help="reduced grids")
    pv.add_argument("--inject-fault", nargs="?", type=float, const=1e-6, default=0.0, help=argparse.SUPPRESS)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(expand_args_file(argv))
        handler = {"force": cmd_force, "sweep": cmd_sweep, "verify": cmd_verify}[args.command]
        return handler(args, out)
    except UsageError as exc:
        print(f"casimir-scalar: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"casimir-scalar: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NonConvergence as exc:
        print(f"casimir-scalar: not converged: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
