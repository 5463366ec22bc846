"""Continuous piecewise-linear functions on the real line.

Every function is an immutable node of a small expression tree. Leaves are
either ``FinitePL`` (finitely many breakpoints, linear extension to both
infinities) or lazy generators that produce breakpoints on demand for any
bounded window (``PeriodicExtension``, ``Exponential``, ``CellwisePL``).
Inner nodes implement the max-plus operations::

    f (+) g = max(f, g)      f (x) g = f + g      f (/) g = f - g
    f^(x)a  = a * f          x -> f(x + c)        x -> f(-x)

Each node answers three questions, all vectorized over numpy arrays:

* ``f(x)``            -- the value,
* ``f.slopes(x)``     -- the one-sided derivatives ``(f'(x-), f'(x+))``,
* ``f.kinks(lo, hi)`` -- a finite superset of the breakpoints in ``[lo, hi]``.

:func:`breakpoints_in` turns the candidate kinks into canonical
:class:`BreakpointEvent` records (deduplicated, with zero jumps removed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Real
from typing import Callable, Sequence

import numpy as np

from .errors import (
    BreakpointBudgetExceeded,
    InvalidParameters,
    InvalidSpec,
    WindowExceeded,
)

DEFAULT_EPS = 1e-9
DEFAULT_BUDGET = 10**6

# stay a little below log(DBL_MAX) so that products with O(1) factors are finite
_LOG_FLOAT_MAX = math.log(np.finfo(float).max) - 2.0


def slope_equal(a: float, b: float, eps: float = DEFAULT_EPS) -> bool:
    """Relative equality used for slopes: ``|a-b| <= eps*max(1,|a|,|b|)``."""
    return abs(a - b) <= eps * max(1.0, abs(a), abs(b))


def _loc_tol(x, eps: float = DEFAULT_EPS):
    return eps * np.maximum(1.0, np.abs(x))


def _as_array(x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    return np.atleast_1d(arr).ravel(), arr.ndim == 0


# --------------------------------------------------------------------------
# events


@dataclass(frozen=True)
class BreakpointEvent:
    """One slope discontinuity of a tropical meromorphic function."""

    x: float
    left_slope: float
    right_slope: float

    @property
    def omega(self) -> float:
        return self.right_slope - self.left_slope

    @property
    def tau(self) -> float:
        return abs(self.omega)

    @property
    def kind(self) -> str:
        return "pole" if self.omega < 0 else "root"

    @property
    def is_pole(self) -> bool:
        return self.omega < 0


# --------------------------------------------------------------------------
# base class


class TropicalPL:
    """A continuous piecewise-linear function ``R -> R``.

    Subclasses implement ``_eval``, ``_slopes`` and ``kinks``; everything
    else (operators, scalar/array dispatch) lives here.
    """

    kind = "abstract"

    def __call__(self, x):
        xs, scalar = _as_array(x)
        out = self._eval(xs)
        if scalar:
            return float(out[0])
        return out.reshape(np.shape(x))

    def slopes(self, x):
        """Return ``(left, right)`` one-sided slopes at ``x``."""
        xs, scalar = _as_array(x)
        left, right = self._slopes(xs)
        if scalar:
            return float(left[0]), float(right[0])
        return left.reshape(np.shape(x)), right.reshape(np.shape(x))

    def _eval(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _slopes(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def kinks(self, lo: float, hi: float, budget: int = DEFAULT_BUDGET) -> np.ndarray:
        """Candidate breakpoints in ``[lo, hi]`` (sorted, possibly redundant)."""
        raise NotImplementedError

    def to_spec(self) -> dict:
        raise NotImplementedError(f"{type(self).__name__} has no JSON spec")

    # --- algebra -----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Real):
            return Sum((self, constant(float(other))))
        if isinstance(other, TropicalPL):
            return Sum((self, other))
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Real):
            return self + (-float(other))
        if isinstance(other, TropicalPL):
            return Sum((self, Negated(other)))
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, Real):
            return Negated(self) + float(other)
        return NotImplemented

    def __neg__(self):
        return Negated(self)

    def __mul__(self, other):
        if isinstance(other, Real):
            return Scaled(self, float(other))
        return NotImplemented

    __rmul__ = __mul__

    def shift(self, c: float) -> "TropicalPL":
        return Shifted(self, c)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} kind={self.kind}>"


# --------------------------------------------------------------------------
# finite kind


class FinitePL(TropicalPL):
    """Finitely many breakpoints, extended linearly with the boundary slopes."""

    kind = "finite"

    def __init__(self, points: Sequence[Sequence[float]], slope_left: float, slope_right: float):
        pts = sorted((float(p[0]), float(p[1])) for p in points)
        if not pts:
            raise InvalidSpec("a finite function needs at least one point")
        merged: list[tuple[float, float]] = []
        for x, y in pts:
            if merged and x == merged[-1][0]:
                if not math.isclose(y, merged[-1][1], rel_tol=1e-12, abs_tol=1e-12):
                    raise InvalidSpec(f"inconsistent values at x={x}")
                continue
            merged.append((x, y))
        xs = np.array([p[0] for p in merged])
        ys = np.array([p[1] for p in merged])
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise InvalidSpec("points must be finite")
        if not (math.isfinite(slope_left) and math.isfinite(slope_right)):
            raise InvalidSpec("boundary slopes must be finite")
        self.xs = xs
        self.ys = ys
        self.slope_left = float(slope_left)
        self.slope_right = float(slope_right)
        inner = np.diff(ys) / np.diff(xs) if len(xs) > 1 else np.empty(0)
        # seg_slopes[k] is the slope left of xs[k]; seg_slopes[n] right of xs[-1]
        self.seg_slopes = np.concatenate(([self.slope_left], inner, [self.slope_right]))
        self.xs.setflags(write=False)
        self.ys.setflags(write=False)
        self.seg_slopes.setflags(write=False)

    def _eval(self, x):
        out = np.interp(x, self.xs, self.ys)
        lo = x < self.xs[0]
        hi = x > self.xs[-1]
        out[lo] = self.ys[0] + self.slope_left * (x[lo] - self.xs[0])
        out[hi] = self.ys[-1] + self.slope_right * (x[hi] - self.xs[-1])
        return out

    def _slopes(self, x):
        xs = self.xs
        n = len(xs)
        idx = np.searchsorted(xs, x)
        below = np.clip(idx - 1, 0, n - 1)
        above = np.clip(idx, 0, n - 1)
        d_below = np.abs(x - xs[below])
        d_above = np.abs(x - xs[above])
        nearest = np.where(d_below <= d_above, below, above)
        at_bp = np.minimum(d_below, d_above) <= _loc_tol(x)
        seg = np.searchsorted(xs, x, side="right")
        left = np.where(at_bp, self.seg_slopes[nearest], self.seg_slopes[seg])
        right = np.where(at_bp, self.seg_slopes[nearest + 1], self.seg_slopes[seg])
        return left, right

    def kinks(self, lo, hi, budget=DEFAULT_BUDGET):
        tol = _loc_tol(self.xs)
        return self.xs[(self.xs >= lo - tol) & (self.xs <= hi + tol)]

    def to_spec(self):
        return {
            "kind": "finite",
            "points": [[float(x), float(y)] for x, y in zip(self.xs, self.ys)],
            "slope_left": self.slope_left,
            "slope_right": self.slope_right,
        }


def constant(a: float) -> FinitePL:
    return FinitePL([(0.0, a)], 0.0, 0.0)


def linear(slope: float, intercept: float = 0.0) -> FinitePL:
    """The affine function ``x -> slope*x + intercept``."""
    return FinitePL([(0.0, intercept)], slope, slope)


# --------------------------------------------------------------------------
# lazy generators


def _signed_power(mu: float, k: np.ndarray) -> np.ndarray:
    """``mu**k`` for integer-valued ``k`` with an overflow guard."""
    if mu == 1.0:
        return np.ones_like(k)
    logs = k * math.log(abs(mu))
    if logs.size and np.max(logs) > _LOG_FLOAT_MAX:
        raise WindowExceeded(
            f"|{mu}|^{int(k[np.argmax(logs)])} exceeds the largest finite float"
        )
    mag = np.power(abs(mu), k)
    if mu < 0:
        mag = np.where(np.mod(k, 2) == 0, mag, -mag)
    return mag


class PeriodicExtension(TropicalPL):
    """``f(x) = mu**k * base(x - k*p)`` on ``[x0 + k p, x0 + (k+1) p)``.

    ``mu = 1`` gives a p-periodic function, ``mu = -1`` an anti-periodic one,
    and any other ``mu`` the geometric growth of a tropical exponential.
    Continuity requires ``base(x0 + p) == mu * base(x0)``.
    """

    kind = "periodic-extension"

    def __init__(self, points: Sequence[Sequence[float]], multiplier: float = 1.0, eps: float = DEFAULT_EPS):
        base = FinitePL(points, 0.0, 0.0)
        if len(base.xs) < 2:
            raise InvalidSpec("periodic base needs at least two points")
        mu = float(multiplier)
        if mu == 0.0 or not math.isfinite(mu):
            raise InvalidParameters("multiplier must be finite and nonzero")
        y0, y1 = base.ys[0], base.ys[-1]
        if abs(y1 - mu * y0) > eps * max(1.0, abs(y1), abs(mu * y0)):
            raise InvalidSpec(
                f"discontinuous extension: base(end)={y1} but multiplier*base(start)={mu * y0}"
            )
        self.base = base
        self.x0 = float(base.xs[0])
        self.period = float(base.xs[-1] - base.xs[0])
        self.multiplier = mu
        # interior slopes of the base, first and last segment
        self._first_slope = float(base.seg_slopes[1])
        self._last_slope = float(base.seg_slopes[-2])

    def _cell(self, x):
        k = np.floor((x - self.x0) / self.period)
        u = x - self.x0 - k * self.period
        tol = _loc_tol(x)
        wrap = u >= self.period - tol
        k = np.where(wrap, k + 1, k)
        u = np.where(wrap, u - self.period, u)
        return k, np.clip(u, 0.0, self.period)

    def _eval(self, x):
        k, u = self._cell(x)
        return _signed_power(self.multiplier, k) * self.base._eval(self.x0 + u)

    def _slopes(self, x):
        k, u = self._cell(x)
        scale = _signed_power(self.multiplier, k)
        at_start = u <= _loc_tol(x)
        bl, br = self.base._slopes(self.x0 + u)
        left_start = _signed_power(self.multiplier, k - 1) * self._last_slope
        left = np.where(at_start, left_start, scale * bl)
        right = np.where(at_start, scale * self._first_slope, scale * br)
        return left, right

    def kinks(self, lo, hi, budget=DEFAULT_BUDGET):
        kmin = math.floor((lo - self.x0) / self.period) - 1
        kmax = math.floor((hi - self.x0) / self.period) + 1
        offsets = self.base.xs[:-1] - self.x0
        count = (kmax - kmin + 1) * len(offsets)
        if count > budget:
            raise BreakpointBudgetExceeded(
                f"{count} candidate breakpoints in [{lo}, {hi}] exceed budget {budget}"
            )
        ks = np.arange(kmin, kmax + 1, dtype=float)
        pts = (self.x0 + ks[:, None] * self.period + offsets[None, :]).ravel()
        tol = _loc_tol(pts)
        return pts[(pts >= lo - tol) & (pts <= hi + tol)]

    def to_spec(self):
        return {
            "kind": "periodic",
            "points": [[float(x), float(y)] for x, y in zip(self.base.xs, self.base.ys)],
            "multiplier": self.multiplier,
        }


class Exponential(PeriodicExtension):
    """Tropical exponential ``e_alpha``: the PL solution of ``y(x+1) = alpha*y(x)``.

    For ``|alpha| > 1``: ``e(x) = alpha**[x] * (x - [x] + 1/(alpha-1))``.
    For ``|alpha| < 1``: ``e(x) = alpha**[x] * (1/(1-alpha) - x + [x])``.
    """

    kind = "exponential"

    def __init__(self, alpha: float):
        alpha = float(alpha)
        if not math.isfinite(alpha) or alpha == 0.0 or abs(alpha) == 1.0:
            raise InvalidParameters(f"e_alpha needs alpha not in {{0, 1, -1}}, got {alpha}")
        if abs(alpha) > 1:
            k = 1.0 / (alpha - 1.0)
            points = [(0.0, k), (1.0, 1.0 + k)]
        else:
            k = 1.0 / (1.0 - alpha)
            points = [(0.0, k), (1.0, k - 1.0)]
        super().__init__(points, multiplier=alpha, eps=1e-12)
        self.alpha = alpha

    def to_spec(self):
        return {"kind": "exponential", "alpha": self.alpha}


class CellwisePL(TropicalPL):
    """Generator affine on every unit cell ``[n, n+1)``.

    ``value_at(n)`` gives f(n) and ``slope_on(n)`` the slope on the cell; both
    receive integer-valued float arrays. The caller guarantees continuity,
    ``value_at(n) + slope_on(n) == value_at(n+1)``.
    """

    kind = "custom-generator"

    def __init__(self, value_at: Callable[[np.ndarray], np.ndarray], slope_on: Callable[[np.ndarray], np.ndarray]):
        self.value_at = value_at
        self.slope_on = slope_on

    def _eval(self, x):
        n = np.floor(x)
        return self.value_at(n) + self.slope_on(n) * (x - n)

    def _slopes(self, x):
        n = np.round(x)
        at_int = np.abs(x - n) <= _loc_tol(x)
        cell = np.where(at_int, n, np.floor(x))
        right = self.slope_on(cell)
        left = np.where(at_int, self.slope_on(cell - 1), right)
        return left, right

    def kinks(self, lo, hi, budget=DEFAULT_BUDGET):
        a, b = math.ceil(lo), math.floor(hi)
        if b - a + 1 > budget:
            raise BreakpointBudgetExceeded(f"{b - a + 1} integer cells exceed budget {budget}")
        return np.arange(a, b + 1, dtype=float)

    def continuity_defect(self, lo: int, hi: int) -> float:
        """Largest jump ``|f(n-) - f(n)|`` over integers ``lo..hi``."""
        n = np.arange(lo, hi + 1, dtype=float)
        return float(np.max(np.abs(self.value_at(n - 1) + self.slope_on(n - 1) - self.value_at(n))))


# --------------------------------------------------------------------------
# combinators


class Shifted(TropicalPL):
    kind = "shift"

    def __init__(self, f: TropicalPL, c: float):
        self.f = f
        self.c = float(c)

    def _eval(self, x):
        return self.f._eval(x + self.c)

    def _slopes(self, x):
        return self.f._slopes(x + self.c)

    def kinks(self, lo, hi, budget=DEFAULT_BUDGET):
        return self.f.kinks(lo + self.c, hi + self.c, budget) - self.c

    def to_spec(self):
        return {"kind": "shift", "arg": self.f.to_spec(), "c": self.c}


class Reflected(TropicalPL):
    """``x -> f(-x)``."""

    kind = "reflect"

    def __init__(self, f: TropicalPL):
        self.f = f

    def _eval(self, x):
        return self.f._eval(-x)

    def _slopes(self, x):
        left, right = self.f._slopes(-x)
        return -right, -left

    def kinks(self, lo, hi, budget=DEFAULT_BUDGET):
        return -self.f.kinks(-hi, -lo, budget)[::-1]

    def to_spec(self):
        return {"kind": "reflect", "arg": self.f.to_spec()}


class Scaled(TropicalPL):
    kind = "scale"

    def __init__(self, f: TropicalPL, alpha: float):
        self.f = f
        self.alpha = float(alpha)

    def _eval(self, x):
        return self.alpha * self.f._eval(x)

    def _slopes(self, x):
        left, right = self.f._slopes(x)
        return self.alpha * left, self.alpha * right

    def kinks(self, lo, hi, budget=DEFAULT_BUDGET):
        if self.alpha == 0.0:
            return np.empty(0)
        return self.f.kinks(lo, hi, budget)

    def to_spec(self):
        return {"kind": "scale", "arg": self.f.to_spec(), "alpha": self.alpha}


class Negated(Scaled):
    kind = "negated"

    def __init__(self, f: TropicalPL):
        super().__init__(f, -1.0)

    def to_spec(self):
        return {"kind": "neg", "arg": self.f.to_spec()}


def _merge_kinks(parts: Sequence[np.ndarray], budget: int) -> np.ndarray:
    out = np.concatenate(parts) if parts else np.empty(0)
    if out.size > budget:
        raise BreakpointBudgetExceeded(f"{out.size} candidate breakpoints exceed budget {budget}")
    return np.sort(out)


class Sum(TropicalPL):
    """Tropical product ``f1 (x) f2 (x) ...`` (pointwise sum)."""

    kind = "sum"

    def __init__(self, args: Sequence[TropicalPL]):
        self.args = tuple(args)
        if not self.args:
            raise InvalidSpec("sum needs at least one argument")

    def _eval(self, x):
        out = self.args[0]._eval(x)
        for g in self.args[1:]:
            out = out + g._eval(x)
        return out

    def _slopes(self, x):
        left, right = self.args[0]._slopes(x)
        for g in self.args[1:]:
            gl, gr = g._slopes(x)
            left, right = left + gl, right + gr
        return left, right

    def kinks(self, lo, hi, budget=DEFAULT_BUDGET):
        return _merge_kinks([g.kinks(lo, hi, budget) for g in self.args], budget)

    def to_spec(self):
        return {"kind": "sum", "args": [g.to_spec() for g in self.args]}


class Max(TropicalPL):
    """Tropical sum ``f (+) g`` (pointwise maximum of two functions)."""

    kind = "max"

    def __init__(self, f: TropicalPL, g: TropicalPL, eps: float = DEFAULT_EPS):
        self.f = f
        self.g = g
        self.eps = eps

    def _eval(self, x):
        return np.maximum(self.f._eval(x), self.g._eval(x))

    def _slopes(self, x):
        fv, gv = self.f._eval(x), self.g._eval(x)
        fl, fr = self.f._slopes(x)
        gl, gr = self.g._slopes(x)
        # a crossing located to within _loc_tol leaves a value gap of up to slope * _loc_tol
        steep = np.maximum(np.maximum(np.abs(fl), np.abs(fr)), np.maximum(np.abs(gl), np.abs(gr)))
        tol = self.eps * np.maximum(1.0, np.maximum(np.abs(fv), np.abs(gv))) + steep * _loc_tol(x, self.eps)
        tie = np.abs(fv - gv) <= tol
        f_on_top = fv > gv
        right = np.where(tie, np.maximum(fr, gr), np.where(f_on_top, fr, gr))
        left = np.where(tie, np.minimum(fl, gl), np.where(f_on_top, fl, gl))
        return left, right

    def kinks(self, lo, hi, budget=DEFAULT_BUDGET):
        children = _merge_kinks([self.f.kinks(lo, hi, budget), self.g.kinks(lo, hi, budget)], budget)
        grid = np.unique(np.concatenate(([lo], children[(children > lo) & (children < hi)], [hi])))
        h = self.f._eval(grid) - self.g._eval(grid)
        a, b = h[:-1], h[1:]
        cross = a * b < 0
        x_a, x_b = grid[:-1][cross], grid[1:][cross]
        roots = x_a + a[cross] * (x_b - x_a) / (a[cross] - b[cross])
        return _merge_kinks([children, roots], budget)

    def to_spec(self):
        args = []
        for g in (self.f, self.g):
            args.extend(g.to_spec()["args"] if isinstance(g, Max) else [g.to_spec()])
        return {"kind": "max", "args": args}


# --------------------------------------------------------------------------
# public operations


def eval_at(f: TropicalPL, x):
    """``f(x)``; generators raise :class:`WindowExceeded` outside their window."""
    return f(x)


def one_sided_slopes(f: TropicalPL, x: float) -> tuple[float, float]:
    return f.slopes(float(x))


def tropical_max(*fs: TropicalPL) -> TropicalPL:
    """``f1 (+) f2 (+) ...``; plain numbers are promoted to constants."""
    fs = [constant(float(f)) if isinstance(f, Real) else f for f in fs]
    if not fs:
        raise InvalidSpec("tropical_max needs at least one argument")
    out = fs[0]
    for g in fs[1:]:
        out = Max(out, g)
    return out


def tropical_plus(*fs: TropicalPL) -> TropicalPL:
    fs = [constant(float(f)) if isinstance(f, Real) else f for f in fs]
    return fs[0] if len(fs) == 1 else Sum(fs)


def tropical_minus(f: TropicalPL, g: TropicalPL) -> TropicalPL:
    return f - g


def tropical_scale(f: TropicalPL, alpha: float) -> TropicalPL:
    return Scaled(f, alpha)


def shift(f: TropicalPL, c: float) -> TropicalPL:
    return Shifted(f, c)


def reflect(f: TropicalPL) -> TropicalPL:
    return Reflected(f)


def negate(f: TropicalPL) -> TropicalPL:
    return Negated(f)


def positive_part(f: TropicalPL) -> TropicalPL:
    return Max(f, constant(0.0))


# --------------------------------------------------------------------------
# breakpoints


def _dedup(points: np.ndarray, eps: float) -> np.ndarray:
    if points.size == 0:
        return points
    points = np.sort(points)
    keep = np.empty(points.size, dtype=bool)
    keep[0] = True
    keep[1:] = np.diff(points) > _loc_tol(points[1:], eps)
    return points[keep]


def event_arrays(
    f: TropicalPL,
    lo: float,
    hi: float,
    eps: float = DEFAULT_EPS,
    budget: int = DEFAULT_BUDGET,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Breakpoints of ``f`` in ``[lo, hi]`` as arrays ``(x, left, right)``."""
    if not lo < hi:
        raise InvalidParameters(f"need lo < hi, got [{lo}, {hi}]")
    cand = np.asarray(f.kinks(lo, hi, budget), dtype=float)
    if cand.size > budget:
        raise BreakpointBudgetExceeded(f"{cand.size} candidates exceed budget {budget}")
    cand = _dedup(cand, eps)
    tol = _loc_tol(cand, eps)
    cand = cand[(cand >= lo - tol) & (cand <= hi + tol)]
    if cand.size == 0:
        empty = np.empty(0)
        return empty, empty, empty
    left, right = f._slopes(cand)
    scale = np.maximum(1.0, np.maximum(np.abs(left), np.abs(right)))
    jump = np.abs(right - left) > eps * scale
    return cand[jump], left[jump], right[jump]


def breakpoints_in(
    f: TropicalPL,
    lo: float,
    hi: float,
    eps: float = DEFAULT_EPS,
    budget: int = DEFAULT_BUDGET,
) -> list[BreakpointEvent]:
    """All breakpoints of ``f`` in the closed interval ``[lo, hi]``."""
    xs, left, right = event_arrays(f, lo, hi, eps, budget)
    return [BreakpointEvent(float(x), float(l), float(r)) for x, l, r in zip(xs, left, right)]


def restrict(f: TropicalPL, lo: float, hi: float, eps: float = DEFAULT_EPS) -> FinitePL:
    """Materialize ``f`` on ``[lo, hi]`` as a finite function.

    The boundary slopes are the one-sided slopes of ``f`` just inside the window.
    """
    xs, _, _ = event_arrays(f, lo, hi, eps)
    grid = np.unique(np.concatenate(([lo], xs, [hi])))
    left, _ = f._slopes(np.array([hi]))
    _, right = f._slopes(np.array([lo]))
    return FinitePL(np.column_stack((grid, f._eval(grid))), float(right[0]), float(left[0]))
