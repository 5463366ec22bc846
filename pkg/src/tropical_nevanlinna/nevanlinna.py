"""Nevanlinna functionals of tropical meromorphic functions.

For a continuous piecewise-linear ``f`` and radius ``r > 0``::

    m(r, f) = (f+(r) + f+(-r)) / 2
    n(t, f) = sum of pole multiplicities tau_f(b) over |b| < t
    N(r, f) = 1/2 * sum_{|b| < r} tau_f(b) * (r - |b|)
    T(r, f) = m(r, f) + N(r, f)

All functionals accept a scalar radius or an array of radii. Pole data is
gathered once on the largest window and reused for every radius.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

import numpy as np

from .pl_core import DEFAULT_BUDGET, DEFAULT_EPS, TropicalPL, event_arrays, tropical_max
from .report import DEFAULT_REL_TOL, VerificationReport, inequality_report


@dataclass(frozen=True)
class NevanlinnaSample:
    r: float
    m: float
    n_poles: float
    N: float
    T: float


@dataclass
class GrowthEstimate:
    """Finite-grid proxies for the order and hyper-order of ``T(r, f)``.

    ``order`` and ``hyper_order`` are the max-over-tail proxies of the
    limsup definitions; ``order_slope`` and ``hyper_order_slope`` are
    least-squares slopes of ``log T`` and ``log log T`` against ``log r`` on
    the same tail, which converge much faster for regularly growing ``T``.
    """

    order: float
    hyper_order: float | None
    order_slope: float
    hyper_order_slope: float | None
    infinite_order: bool
    grid: np.ndarray
    T: np.ndarray
    tail_fraction: float
    notes: str = ""
    tail: np.ndarray = field(repr=False, default=None)


def _radii(r) -> tuple[np.ndarray, bool]:
    arr = np.asarray(r, dtype=float)
    flat = np.atleast_1d(arr).ravel()
    if np.any(flat <= 0) or not np.all(np.isfinite(flat)):
        raise ValueError("radii must be finite and positive")
    return flat, arr.ndim == 0


def _unwrap(values: np.ndarray, scalar: bool):
    return float(values[0]) if scalar else values


class PoleProfile:
    """Sorted pole distances ``|b|`` with cumulative multiplicities on ``[-R, R]``.

    Answers ``n(t)`` and ``N(r)`` for any ``t, r <= R`` by binary search.
    """

    def __init__(self, f: TropicalPL, R: float, eps: float = DEFAULT_EPS, budget: int = DEFAULT_BUDGET):
        xs, left, right = event_arrays(f, -R, R, eps, budget)
        omega = right - left
        poles = omega < 0
        dist = np.abs(xs[poles])
        order = np.argsort(dist, kind="stable")
        self.R = R
        self.dist = dist[order]
        self.tau = -omega[poles][order]
        self._cum_tau = np.concatenate(([0.0], np.cumsum(self.tau)))
        self._cum_moment = np.concatenate(([0.0], np.cumsum(self.tau * self.dist)))

    def n(self, t: np.ndarray) -> np.ndarray:
        k = np.searchsorted(self.dist, t, side="left")
        return self._cum_tau[k]

    def N(self, r: np.ndarray) -> np.ndarray:
        k = np.searchsorted(self.dist, r, side="left")
        return 0.5 * (r * self._cum_tau[k] - self._cum_moment[k])


def proximity(f: TropicalPL, r):
    """``m(r, f)``."""
    rs, scalar = _radii(r)
    out = 0.5 * (np.maximum(f(rs), 0.0) + np.maximum(f(-rs), 0.0))
    return _unwrap(out, scalar)


def count_poles(f: TropicalPL, t, eps: float = DEFAULT_EPS, budget: int = DEFAULT_BUDGET):
    """``n(t, f)``: pole multiplicities summed over the open interval ``(-t, t)``."""
    arr = np.asarray(t, dtype=float)
    ts = np.atleast_1d(arr).ravel()
    if np.any(ts < 0):
        raise ValueError("t must be non-negative")
    R = float(ts.max())
    if R == 0:
        out = np.zeros_like(ts)
    else:
        out = PoleProfile(f, R, eps, budget).n(ts)
    return _unwrap(out, arr.ndim == 0)


def counting(f: TropicalPL, r, eps: float = DEFAULT_EPS, budget: int = DEFAULT_BUDGET):
    """``N(r, f)`` from the closed-form sum over poles."""
    rs, scalar = _radii(r)
    out = PoleProfile(f, float(rs.max()), eps, budget).N(rs)
    return _unwrap(out, scalar)


def characteristic_value(f: TropicalPL, r, eps: float = DEFAULT_EPS, budget: int = DEFAULT_BUDGET):
    """``T(r, f) = m(r, f) + N(r, f)`` as a float or array."""
    rs, scalar = _radii(r)
    out = proximity(f, rs) + PoleProfile(f, float(rs.max()), eps, budget).N(rs)
    return _unwrap(out, scalar)


def sweep(f: TropicalPL, radii: Iterable[float], eps: float = DEFAULT_EPS, budget: int = DEFAULT_BUDGET) -> list[NevanlinnaSample]:
    """One :class:`NevanlinnaSample` per radius, in the given order."""
    rs, _ = _radii(list(radii))
    profile = PoleProfile(f, float(rs.max()), eps, budget)
    m = proximity(f, rs)
    N = profile.N(rs)
    n = profile.n(rs)
    return [NevanlinnaSample(float(r), float(a), float(b), float(c), float(a + c)) for r, a, b, c in zip(rs, m, n, N)]


def characteristic(f: TropicalPL, r: float, eps: float = DEFAULT_EPS, budget: int = DEFAULT_BUDGET) -> NevanlinnaSample:
    return sweep(f, [r], eps, budget)[0]


def write_sweep_csv(samples: Sequence[NevanlinnaSample], out: IO[str]) -> None:
    """CSV with header ``r,m,n,N,T`` and round-trip float formatting."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["r", "m", "n", "N", "T"])
    for s in samples:
        writer.writerow([repr(s.r), repr(s.m), repr(s.n_poles), repr(s.N), repr(s.T)])


# --------------------------------------------------------------------------
# identities


def verify_jensen(f: TropicalPL, r, rel_tol: float = DEFAULT_REL_TOL) -> VerificationReport:
    """``T(r, f) - T(r, -f) = f(0)``, checked two-sided at each radius."""
    rs, _ = _radii(r)
    T_f = characteristic_value(f, rs)
    T_neg = characteristic_value(-f, rs)
    f0 = f(0.0)
    lhs = T_f - T_neg
    return VerificationReport(
        "jensen",
        rs.tolist(),
        lhs.tolist(),
        [f0] * len(rs),
        (rel_tol * np.maximum(1.0, T_f)).tolist(),
        two_sided=True,
    )


def poisson_jensen_rhs(f: TropicalPL, r: float, x: float, eps: float = DEFAULT_EPS) -> float:
    """Right-hand side of the Poisson-Jensen formula at ``x`` in ``(-r, r)``."""
    xs, left, right = event_arrays(f, -r, r, eps)
    inside = np.abs(xs) < r
    c, omega = xs[inside], (right - left)[inside]
    fr, fmr = f(r), f(-r)
    correction = np.sum(omega * (r * r - np.abs(c - x) * r - c * x))
    return 0.5 * (fr + fmr) + x / (2 * r) * (fr - fmr) - correction / (2 * r)


def verify_poisson_jensen(f: TropicalPL, r: float, x: float, rel_tol: float = DEFAULT_REL_TOL) -> VerificationReport:
    if not r > 0:
        raise ValueError("r must be positive")
    if not -r < x < r:
        raise ValueError("x must lie in (-r, r)")
    fx = f(x)
    rhs = poisson_jensen_rhs(f, r, x)
    return VerificationReport(
        "poisson-jensen",
        [float(r)],
        [fx],
        [rhs],
        [rel_tol * max(1.0, abs(fx))],
        two_sided=True,
        instance={"x": float(x)},
    )


# --------------------------------------------------------------------------
# pole / root floors


def _window(window) -> tuple[float, float]:
    if np.ndim(window) == 0:
        R = float(window)
        return -R, R
    lo, hi = window
    return float(lo), float(hi)


def pole_floor(f: TropicalPL, window, eps: float = DEFAULT_EPS) -> float:
    """``L_f`` on a window: min of ``f`` over its poles, ``inf`` if there are none.

    ``window`` is either ``(lo, hi)`` or a radius ``R`` meaning ``[-R, R]``.
    """
    xs, left, right = event_arrays(f, *_window(window), eps)
    poles = xs[right - left < 0]
    return float(np.min(f(poles))) if poles.size else math.inf


def root_floor(f: TropicalPL, window, eps: float = DEFAULT_EPS) -> float:
    """``l_f`` on a window: min of ``f`` over its roots, ``inf`` if there are none."""
    xs, left, right = event_arrays(f, *_window(window), eps)
    roots = xs[right - left > 0]
    return float(np.min(f(roots))) if roots.size else math.inf


# --------------------------------------------------------------------------
# first main theorem


def fmt_defect(f: TropicalPL, a: float, r):
    """``eps(r, a) = T(r, -max(f, a)) - T(r, f) + max(f(0), a)``."""
    rs, scalar = _radii(r)
    g = -tropical_max(f, a)
    out = characteristic_value(g, rs) - characteristic_value(f, rs) + max(f(0.0), a)
    return _unwrap(out, scalar)


def verify_first_main(f: TropicalPL, a: float, r, rel_tol: float = DEFAULT_REL_TOL) -> VerificationReport:
    """``T(r, -max(f, a)) <= T(r, f) + max(a, 0) - max(f(0), a)``.

    When ``a`` lies below every pole value of ``f`` on ``[-r, r]`` the defect
    band ``0 <= eps(r, a)`` is attached as a second component.
    """
    rs, _ = _radii(r)
    T_f = characteristic_value(f, rs)
    lhs = characteristic_value(-tropical_max(f, a), rs)
    rhs = T_f + max(a, 0.0) - max(f(0.0), a)
    report = inequality_report("first-main", rs, lhs, rhs, rel_tol, instance={"a": float(a)})
    if a < pole_floor(f, float(rs.max())):
        eps_ra = lhs - T_f + max(f(0.0), a)
        report.components["defect-band"] = inequality_report("first-main-band", rs, np.zeros_like(eps_ra), eps_ra, rel_tol)
    return report


# --------------------------------------------------------------------------
# growth


def geometric_grid(r_min: float, r_max: float, points: int) -> np.ndarray:
    return np.geomspace(r_min, r_max, points)


def _slope(x: np.ndarray, y: np.ndarray) -> float:
    return float(np.polyfit(x, y, 1)[0])


def estimate_growth(
    f: TropicalPL,
    r_min: float,
    r_max: float,
    points: int = 64,
    tail_fraction: float = 0.5,
    infinite_threshold: float = 0.5,
) -> GrowthEstimate:
    """Estimate order and hyper-order of ``f`` on a geometric radius grid.

    The order is flagged infinite when the hyper-order slope exceeds
    ``infinite_threshold``; for finite-order functions that slope decays
    like ``1/log r``.
    """
    if not 0 < r_min < r_max:
        raise ValueError("need 0 < r_min < r_max")
    if points < 8:
        raise ValueError("need at least 8 grid points")
    if not 0 < tail_fraction < 1:
        raise ValueError("tail_fraction must lie in (0, 1)")
    if r_min <= 1:
        raise ValueError("r_min must exceed 1 so that log r > 0")
    grid = geometric_grid(r_min, r_max, points)
    T = characteristic_value(f, grid)
    start = int(math.floor(points * (1 - tail_fraction)))
    tail = np.arange(start, points)
    log_r = np.log(grid[tail])
    with np.errstate(divide="ignore"):
        log_T = np.log(T[tail])
    finite = np.isfinite(log_T)
    order = float(np.max(log_T[finite] / log_r[finite])) if finite.any() else 0.0
    order = max(order, 0.0)
    order_slope = _slope(log_r[finite], log_T[finite]) if finite.sum() >= 2 else 0.0

    positive = T[tail] > 1.0
    notes = ""
    hyper = hyper_slope = None
    if positive.sum() >= 2:
        ll = np.log(np.log(T[tail][positive]))
        hyper = max(float(np.max(ll / log_r[positive])), 0.0)
        hyper_slope = _slope(log_r[positive], ll)
    else:
        notes = "T <= 1 on the tail; hyper-order undefined"
    infinite = hyper_slope is not None and hyper_slope > infinite_threshold
    return GrowthEstimate(order, hyper, order_slope, hyper_slope, infinite, grid, T, tail_fraction, notes, tail)
