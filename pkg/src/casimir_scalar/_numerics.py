"""Low-level quadrature, extrapolation and summation kernels.

Everything here works on numpy arrays and is free of module state apart from
cached rule tables, so it is safe to use from several threads.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

EPS = float(np.finfo(float).eps)

# 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# Full symmetric layout: nodes on [-1, 1] with Kronrod and Gauss weights.
GK_NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[:-1][::-1]])
GK_WEIGHTS = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[:-1][::-1]])
_wg_full = np.zeros(15)
_wg_full[1:7:2] = _WG[:3]
_wg_full[7] = _WG[3]
_wg_full[8:15] = _wg_full[:7][::-1]
G_WEIGHTS = _wg_full


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _gk_batch(f, lo: np.ndarray, hi: np.ndarray):
    """Apply the 15-point rule on every interval [lo[i], hi[i]] in one call of ``f``."""
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    nodes = center[:, None] + half[:, None] * GK_NODES[None, :]
    vals = np.asarray(f(nodes.ravel()), dtype=float)
    vals = vals.reshape(nodes.shape + vals.shape[1:])
    # move node axis last so weights broadcast over trailing value axes
    vals = np.moveaxis(vals, 1, -1)
    hw = half.reshape(half.shape + (1,) * (vals.ndim - 2))
    res_k = np.sum(vals * GK_WEIGHTS, axis=-1) * hw
    res_g = np.sum(vals * G_WEIGHTS, axis=-1) * hw
    res_abs = np.sum(np.abs(vals) * GK_WEIGHTS, axis=-1) * np.abs(hw)
    mean = res_k / np.where(hw == 0, 1.0, hw) * 0.5
    res_asc = np.sum(np.abs(vals - mean[..., None]) * GK_WEIGHTS, axis=-1) * np.abs(hw)
    err = np.abs(res_k - res_g)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = np.where(
            (res_asc != 0) & (err != 0),
            res_asc * np.minimum(1.0, (200.0 * err / res_asc) ** 1.5),
            err,
        )
    err = np.maximum(scaled, 4 * EPS * res_abs)
    return res_k, err


def adaptive_gauss_kronrod(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    *,
    rtol: float = 1e-12,
    atol: float = 0.0,
    breakpoints: Sequence[float] | None = None,
    max_rounds: int = 60,
    max_intervals: int = 20000,
):
    """Globally adaptive Gauss-Kronrod quadrature over a finite interval.

    ``f`` receives a flat array of nodes and returns values whose first axis
    matches the nodes; trailing axes make the integrand vector valued, and the
    tolerance test then uses the worst component. All intervals flagged for
    refinement in one round are evaluated in a single call of ``f``.

    Returns ``(value, abs_error, n_evals, converged)``.
    """
    if breakpoints is None:
        edges = np.array([a, b], dtype=float)
    else:
        edges = np.unique(np.concatenate([[a, b], np.asarray(breakpoints, float)]))
        edges = edges[(edges >= a) & (edges <= b)]
    lo, hi = edges[:-1].copy(), edges[1:].copy()
    vals, errs = _gk_batch(f, lo, hi)
    n_evals = 15 * lo.size
    converged = False
    for _ in range(max_rounds):
        total = vals.sum(axis=0)
        err_total = errs.sum(axis=0)
        tol = np.maximum(atol, rtol * np.abs(total))
        if np.all(err_total <= tol):
            converged = True
            break
        if lo.size >= max_intervals:
            break
        # refine every interval carrying more than its share of the budget
        share = tol / lo.size
        score = errs / np.where(share > 0, share, 1.0)
        if score.ndim > 1:
            score = score.max(axis=tuple(range(1, score.ndim)))
        pick = score > 1.0
        if not np.any(pick):
            pick = score >= score.max()
        mid = 0.5 * (lo[pick] + hi[pick])
        new_lo = np.concatenate([lo[pick], mid])
        new_hi = np.concatenate([mid, hi[pick]])
        new_vals, new_errs = _gk_batch(f, new_lo, new_hi)
        n_evals += 15 * new_lo.size
        keep = ~pick
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        vals = np.concatenate([vals[keep], new_vals])
        errs = np.concatenate([errs[keep], new_errs])
    order = np.argsort(lo, kind="stable")
    total = vals[order].sum(axis=0)
    err_total = errs.sum(axis=0)
    if total.ndim == 0:
        return float(total), float(err_total), n_evals, converged
    return total, err_total, n_evals, converged


def fixed_gauss_legendre(f, edges: np.ndarray, order: int) -> np.ndarray:
    """Integrate ``f`` panel by panel with a fixed Gauss-Legendre rule.

    Returns the per-panel integrals (first axis = panel).
    """
    x, w = gauss_legendre(order)
    lo, hi = edges[:-1], edges[1:]
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    nodes = center[:, None] + half[:, None] * x[None, :]
    vals = np.asarray(f(nodes.ravel()), dtype=float).reshape(nodes.shape)
    return (vals @ w) * half


def iterated_average(partial_sums: np.ndarray, levels: int) -> tuple[float, float]:
    """Euler transform of an alternating series by repeated pairwise averaging.

    Uses the last ``levels + 1`` partial sums and averages neighbours until a
    single value remains. The error estimate is the gap between the two
    values of the penultimate level.
    """
    s = np.asarray(partial_sums[-(levels + 1):], dtype=float)
    if s.size < 3:
        raise ValueError("need at least three partial sums")
    while s.size > 2:
        s = 0.5 * (s[1:] + s[:-1])
    return float(0.5 * (s[0] + s[1])), float(abs(s[1] - s[0]) * 0.5)


def richardson_table(values: Sequence[float], ratio: float, power: int, order: int | None = None):
    """Richardson tableau for values sampled at steps h, h/ratio, h/ratio**2, ...

    The error is assumed to expand in powers ``h**power, h**(2 power), ...``.
    Returns the list of tableau rows; row ``i`` holds extrapolants of
    increasing order built from values ``0..i``.
    """
    vals = [float(v) for v in values]
    n = len(vals)
    if order is None:
        order = n - 1
    rows: list[list[float]] = []
    for i in range(n):
        row = [vals[i]]
        for j in range(1, min(i, order) + 1):
            factor = ratio ** (power * j)
            row.append(row[j - 1] + (row[j - 1] - rows[i - 1][j - 1]) / (factor - 1.0))
        rows.append(row)
    return rows


def second_derivative(
    func: Callable[[np.ndarray], np.ndarray],
    x: float,
    h: float = 1e-2,
    levels: int = 2,
) -> tuple[float, float, int]:
    """Central-difference second derivative with Richardson refinement.

    Steps h, h/2, ..., h/2**levels; ``func`` is called once with the whole
    stencil. Returns ``(value, error_estimate, n_points)``.
    """
    steps = h / 2.0 ** np.arange(levels + 1)
    pts = np.concatenate([[x], x - steps, x + steps])
    fv = np.asarray(func(pts), dtype=float)
    f0 = fv[0]
    fm = fv[1:levels + 2]
    fp = fv[levels + 2:]
    diffs = (fp - 2.0 * f0 + fm) / steps**2
    rows = richardson_table(diffs, 2.0, 2)
    best = rows[-1][-1]
    err = abs(best - rows[-2][-1]) if levels > 0 else abs(diffs[0])
    return best, err, pts.size

