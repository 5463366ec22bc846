"""Explicit tropical meromorphic functions and ultra-discrete equation solvers.

* ``make_pi(a, b)``: the 1-periodic sawtooth with a root at every integer
  and a pole at ``b/(a+b)`` mod 1.
* ``build_periodic``: a periodic function from its breakpoint data.
* ``make_exponential(alpha)``: the PL solution ``e_alpha`` of
  ``y(x+1) = alpha * y(x)``.
* ``solve_first_order`` / ``solve_second_order``: closed-form solutions of
  ``y(x+1) = c y(x)`` and ``y(x+1) + y(x-1) = c y(x)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidParameters, InvalidSpec
from .pl_core import (
    DEFAULT_EPS,
    CellwisePL,
    Exponential,
    PeriodicExtension,
    Reflected,
    Scaled,
    Shifted,
    Sum,
    TropicalPL,
    event_arrays,
    linear,
)

VERIFY_POINTS = 1000


def make_pi(a: float, b: float) -> PeriodicExtension:
    """``pi^(a,b)``: 1-periodic, zero at integers, peak ``ab/(a+b)^2`` at ``b/(a+b)``."""
    a, b = float(a), float(b)
    if a == 0 or b == 0 or (a > 0) != (b > 0):
        raise InvalidParameters(f"pi^(a,b) needs a, b nonzero with equal signs, got ({a}, {b})")
    s = a + b
    peak_at = b / s
    return PeriodicExtension([(0.0, 0.0), (peak_at, a * b / s**2), (1.0, 0.0)])


@dataclass
class PeriodicSpec:
    """Breakpoint data ``(c_k, omega_k)`` of a periodic function on ``[0, period)``."""

    events: Sequence[tuple[float, float]]
    anchor: float = 0.0
    period: float = 1.0

    def validate(self, eps: float = DEFAULT_EPS) -> None:
        if not self.period > 0:
            raise InvalidSpec("period must be positive")
        total = 0.0
        scale = 1.0
        for c, w in self.events:
            if not 0 <= c < self.period:
                raise InvalidSpec(f"event location {c} outside [0, {self.period})")
            if w == 0:
                raise InvalidSpec("event multiplicity must be nonzero")
            total += w
            scale = max(scale, abs(w))
        if abs(total) > eps * scale:
            raise InvalidSpec(f"omega sums to {total} over a period; a periodic function needs 0")


def build_periodic(spec: PeriodicSpec) -> PeriodicExtension:
    """The unique periodic function with the given events and value at 0.

    On the unit period it is ``f(0) - sum_k omega_k * pi^(c_k - 1, -c_k)`` over
    interior events; the event at 0 is implied by the zero-sum condition.
    Other periods are handled by rescaling x.
    """
    spec.validate()
    p = float(spec.period)
    # rescaling x by p multiplies slopes, hence omegas, by p
    unit = [(c / p, w * p) for c, w in spec.events]
    interior = [(c, w) for c, w in unit if c > 0]
    knots = sorted({0.0, 1.0, *(c for c, _ in interior)})
    values = np.full(len(knots), float(spec.anchor))
    for c, w in interior:
        values -= w * make_pi(c - 1.0, -c)(np.array(knots))
    return PeriodicExtension([(p * x, y) for x, y in zip(knots, values)])


def make_exponential(alpha: float) -> Exponential:
    return Exponential(alpha)


def event_census(f: TropicalPL, lo: float, hi: float, eps: float = DEFAULT_EPS) -> dict:
    """Poles and roots of ``f`` on the half-open window ``[lo, hi)``."""
    xs, left, right = event_arrays(f, lo, hi, eps)
    keep = xs < hi - eps * max(1.0, abs(hi))
    xs, omega = xs[keep], (right - left)[keep]
    poles, roots = omega < 0, omega > 0
    return {
        "poles": [(float(x), float(-w)) for x, w in zip(xs[poles], omega[poles])],
        "roots": [(float(x), float(w)) for x, w in zip(xs[roots], omega[roots])],
        "pole_count": int(poles.sum()),
        "root_count": int(roots.sum()),
        "pole_multiplicity": float(-omega[poles].sum()),
        "root_multiplicity": float(omega[roots].sum()),
    }


# --------------------------------------------------------------------------
# solutions


@dataclass
class UltraDiscreteSolution:
    """A closed-form solution plus the pieces it was assembled from.

    ``basis`` lists ``(generator_id, shift, coefficient)`` triples; each
    generator is evaluated at ``x - shift`` (or ``shift - x`` for reflected
    generators, marked by a ``"reflected:"`` prefix).
    """

    equation: dict
    basis: list[tuple[str, float, float]]
    assembled: TropicalPL
    notes: str = ""
    extra: dict = field(default_factory=dict)

    def residual(self, lo: float = -20.0, hi: float = 20.0, points: int = VERIFY_POINTS) -> tuple[float, float]:
        """``(max |residual|, sup |y|)`` over breakpoints plus a uniform grid."""
        c = self.equation["c"]
        if self.equation["order"] == 1:
            return first_order_residual(self.assembled, c, lo, hi, points)
        return second_order_residual(self.assembled, c, lo, hi, points)

    def verify(self, lo: float = -20.0, hi: float = 20.0, rel_tol: float = 1e-8) -> bool:
        res, sup = self.residual(lo, hi)
        return res <= rel_tol * max(1.0, sup)

    def to_json(self) -> dict:
        out = {
            "equation": self.equation,
            "basis": [{"generator": g, "shift": s, "coefficient": w} for g, s, w in self.basis],
            "function": self.assembled.to_spec(),
        }
        if self.notes:
            out["notes"] = self.notes
        return out


def verification_grid(f: TropicalPL, lo: float, hi: float, points: int = VERIFY_POINTS, pad: float = 1.0) -> np.ndarray:
    """Uniform points on ``[lo, hi]`` plus every breakpoint of ``f`` shifted by 0, +-pad."""
    kinks = np.asarray(f.kinks(lo - pad, hi + pad), dtype=float)
    shifted = np.concatenate((kinks, kinks - pad, kinks + pad))
    shifted = shifted[(shifted >= lo) & (shifted <= hi)]
    return np.unique(np.concatenate((np.linspace(lo, hi, points), shifted)))


def first_order_residual(f: TropicalPL, c: float, lo: float, hi: float, points: int = VERIFY_POINTS):
    x = verification_grid(f, lo, hi, points)
    y = f(x)
    res = f(x + 1.0) - c * y
    return float(np.max(np.abs(res))), float(np.max(np.abs(y)))


def second_order_residual(f: TropicalPL, c: float, lo: float, hi: float, points: int = VERIFY_POINTS):
    x = verification_grid(f, lo, hi, points)
    y = f(x)
    res = f(x + 1.0) + f(x - 1.0) - c * y
    return float(np.max(np.abs(res))), float(np.max(np.abs(y)))


def _assemble(parts: list[TropicalPL]) -> TropicalPL:
    return parts[0] if len(parts) == 1 else Sum(parts)


def exponential_event_weight(c: float) -> float:
    """``omega`` of ``e_c`` at 0: ``1 - 1/c`` for ``|c| > 1`` and ``1/c - 1`` for ``|c| < 1``."""
    return 1.0 - 1.0 / c if abs(c) > 1 else 1.0 / c - 1.0


def solve_first_order(c: float, events: Sequence[tuple[float, float]], normalization: str = "events") -> UltraDiscreteSolution:
    """Solve ``y(x+1) = c y(x)`` as ``sum_j rho * omega_j * e_c(x - x_j)``.

    With ``normalization="events"`` (default) ``rho = 1/omega_{e_c}(0)``, so
    the solution has exactly the prescribed events on ``[0, 1)``.
    ``normalization="classic"`` uses ``rho = c - 1`` for ``|c| > 1`` and
    ``rho = 1 - c`` for ``|c| < 1``, which rescales every event by the same
    factor.
    """
    c = float(c)
    if c == 1.0:
        raise InvalidParameters("c = 1: solutions are 1-periodic; use build_periodic")
    if c == -1.0:
        raise InvalidParameters("c = -1: solutions are anti-1-periodic (2-periodic); use PeriodicExtension with multiplier -1")
    if c == 0.0 or not math.isfinite(c):
        raise InvalidParameters("c must be finite and nonzero")
    if not events:
        raise InvalidParameters("at least one event is required")
    if normalization == "events":
        rho = 1.0 / exponential_event_weight(c)
    elif normalization == "classic":
        rho = c - 1.0 if abs(c) > 1 else 1.0 - c
    else:
        raise InvalidParameters(f"unknown normalization {normalization!r}")
    e_c = Exponential(c)
    parts, basis = [], []
    for x_j, w in events:
        if not 0 <= x_j < 1:
            raise InvalidParameters(f"event location {x_j} outside [0, 1)")
        coeff = rho * w
        parts.append(Scaled(Shifted(e_c, -x_j), coeff))
        basis.append((f"e_{c!r}", float(x_j), coeff))
    branch = "growing" if abs(c) > 1 else "decaying"
    return UltraDiscreteSolution(
        {"order": 1, "c": c},
        basis,
        _assemble(parts),
        notes=f"{branch} exponential branch, normalization={normalization}",
    )


def second_order_root(c: float) -> float:
    """The root of ``t^2 - c t + 1 = 0`` with ``|t| > 1`` (needs ``|c| > 2``)."""
    return (c + math.copysign(math.sqrt(c * c - 4.0), c)) / 2.0


class TrigSolution(CellwisePL):
    """Cellwise generator with slope ``cos(theta n)`` or ``sin(theta n)`` on ``[n, n+1)``."""

    def __init__(self, theta: float, which: int, value_at, slope_on):
        super().__init__(value_at, slope_on)
        self.theta = theta
        self.which = which

    def to_spec(self):
        return {"kind": "trig", "theta": self.theta, "which": self.which}


def make_trig_solution(theta: float, which: int) -> TrigSolution:
    """Basis solutions of ``y(x+1) + y(x-1) = 2 cos(theta) y(x)``, ``0 < theta < pi``.

    On the cell ``[n, n+1)`` the slope is ``cos(theta n)`` (``which=1``) or
    ``sin(theta n)`` (``which=2``); the offsets make both continuous.
    """
    theta = float(theta)
    if not 0 < theta < math.pi:
        raise InvalidParameters(f"theta must lie in (0, pi), got {theta}")
    if which not in (1, 2):
        raise InvalidParameters("which must be 1 or 2")
    ct, st = math.cos(theta), math.sin(theta)
    denom = 2.0 * (1.0 - ct)
    if which == 1:
        def slope_on(n):
            return np.cos(theta * n)

        def value_at(n):
            return (np.cos(theta * n) * (ct - 1.0) + np.sin(theta * n) * st) / denom
    else:
        def slope_on(n):
            return np.sin(theta * n)

        def value_at(n):
            return (np.sin(theta * n) * (ct - 1.0) - np.cos(theta * n) * st) / denom
    return TrigSolution(theta, which, value_at, slope_on)


def delta_fixture() -> PeriodicExtension:
    """A 3-periodic solution of ``y(x+1) + y(x-1) = -y(x)`` built from small tents."""
    points = [
        (0, 0), (1 / 6, -1 / 6), (1 / 3, 0), (2 / 3, 0), (5 / 6, -1 / 6), (1, 0),
        (7 / 6, 1 / 6), (4 / 3, 0), (8 / 3, 0), (17 / 6, 1 / 6), (3, 0),
    ]
    return PeriodicExtension(points)


def _periodic_from(g, name: str) -> TropicalPL:
    if isinstance(g, PeriodicSpec):
        return build_periodic(g)
    if isinstance(g, TropicalPL):
        return g
    raise InvalidParameters(f"{name} must be a PeriodicSpec or a TropicalPL")


def solve_second_order(
    c: float,
    *,
    slope: float = 0.0,
    periodic=None,
    xi_terms: Sequence[tuple[float, object]] = (),
    forward: Sequence[tuple[float, float]] = (),
    backward: Sequence[tuple[float, float]] = (),
    trig_terms: Sequence[tuple[object, float, float]] = (),
) -> UltraDiscreteSolution:
    """Solve ``y(x+1) + y(x-1) = c y(x)``.

    * ``c == 2``: ``slope * x + periodic`` (``periodic`` 1-periodic).
    * ``c == -2``: ``sum_j (-1)^[x - x_j] Xi_j(x)`` from ``xi_terms = [(x_j, Xi_j)]``,
      each ``Xi_j`` 1-periodic with ``Xi_j(x_j) = 0`` for continuity.
    * ``|c| > 2``: ``sum alpha_j e_a(x - y_j) + sum beta_j e_a(x_j - x)`` from
      ``forward = [(y_j, alpha_j)]`` and ``backward = [(x_j, beta_j)]``.
    * ``|c| < 2``: ``sum w * y_k(x - s)`` from ``trig_terms = [(k, s, w)]`` with
      ``k`` in ``{1, 2}``; for ``c == -1`` also ``k == "delta"`` (3-periodic fixture).
    """
    c = float(c)
    eq = {"order": 2, "c": c}
    used = {
        "slope/periodic": bool(slope) or periodic is not None,
        "xi_terms": bool(xi_terms),
        "forward/backward": bool(forward) or bool(backward),
        "trig_terms": bool(trig_terms),
    }
    if c == 2.0:
        case = "slope/periodic"
    elif c == -2.0:
        case = "xi_terms"
    elif abs(c) > 2:
        case = "forward/backward"
    else:
        case = "trig_terms"
    wrong = [k for k, v in used.items() if v and k != case]
    if wrong:
        raise InvalidParameters(f"c = {c} takes {case} data, got {', '.join(wrong)}")
    if not used[case]:
        raise InvalidParameters(f"c = {c} needs {case} data")

    parts: list[TropicalPL] = []
    basis: list[tuple[str, float, float]] = []
    notes = ""
    if case == "slope/periodic":
        if slope:
            parts.append(linear(slope))
            basis.append(("x", 0.0, float(slope)))
        if periodic is not None:
            parts.append(_periodic_from(periodic, "periodic"))
            basis.append(("periodic", 0.0, 1.0))
    elif case == "xi_terms":
        for x_j, xi in xi_terms:
            xi = _periodic_from(xi, "Xi")
            x_j = float(x_j)
            if abs(xi(x_j)) > DEFAULT_EPS * max(1.0, abs(xi(x_j + 0.5))):
                raise InvalidSpec(f"Xi({x_j}) = {xi(x_j)} != 0; the alternating sum would jump at {x_j} + Z")
            kinks = xi.kinks(x_j, x_j + 1.0)
            knots = np.unique(np.concatenate(([x_j], kinks[(kinks > x_j) & (kinks < x_j + 1)], [x_j + 1.0])))
            vals = xi(knots)
            vals[0] = vals[-1] = 0.0
            parts.append(PeriodicExtension(np.column_stack((knots, vals)), multiplier=-1.0))
            basis.append(("alternating", x_j, 1.0))
    elif case == "forward/backward":
        a = second_order_root(c)
        e_a = Exponential(a)
        for y_j, w in forward:
            parts.append(Scaled(Shifted(e_a, -float(y_j)), float(w)))
            basis.append((f"e_{a!r}", float(y_j), float(w)))
        for x_j, w in backward:
            parts.append(Scaled(Reflected(Shifted(e_a, float(x_j))), float(w)))
            basis.append((f"reflected:e_{a!r}", float(x_j), float(w)))
        notes = f"a = {a!r}"
    else:
        theta = math.acos(c / 2.0)
        gens = {1: make_trig_solution(theta, 1), 2: make_trig_solution(theta, 2)}
        for k, s, w in trig_terms:
            if k == "delta":
                if c != -1.0:
                    raise InvalidParameters("the delta fixture solves only c = -1")
                gen = delta_fixture()
            elif k in gens:
                gen = gens[k]
            else:
                raise InvalidParameters(f"unknown basis function {k!r}")
            parts.append(Scaled(Shifted(gen, -float(s)), float(w)))
            basis.append((f"y{k}" if k != "delta" else "delta", float(s), float(w)))
        notes = f"theta = {theta!r}"
    return UltraDiscreteSolution(eq, basis, _assemble(parts), notes=notes)


def casoratian_2x2(f: TropicalPL, g: TropicalPL, x):
    """``f(x) g(x+1) - f(x+1) g(x)`` in ordinary arithmetic."""
    x = np.asarray(x, dtype=float)
    return f(x) * g(x + 1.0) - f(x + 1.0) * g(x)


def probe_delta_decomposition(shifts: Sequence[float] | None = None, lo: float = 0.0, hi: float = 3.0, points: int = 601) -> dict:
    """Least-squares fit of the delta fixture by shifted trig solutions at c = -1.

    Returns the coefficients and the residual; no outcome is implied.
    """
    theta = 2.0 * math.pi / 3.0
    if shifts is None:
        shifts = np.linspace(0.0, 1.0, 7)[:-1]
    y1, y2 = make_trig_solution(theta, 1), make_trig_solution(theta, 2)
    x = np.linspace(lo, hi, points)
    cols = [g(x - s) for s in shifts for g in (y1, y2)]
    A = np.column_stack(cols)
    target = delta_fixture()(x)
    coef, *_ = np.linalg.lstsq(A, target, rcond=None)
    resid = A @ coef - target
    return {
        "shifts": [float(s) for s in shifts],
        "coefficients": coef.tolist(),
        "max_residual": float(np.max(np.abs(resid))),
        "rms_residual": float(np.sqrt(np.mean(resid**2))),
    }
