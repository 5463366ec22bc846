"""Seeded generators of random test instances."""

from __future__ import annotations

import math

import numpy as np

from .diff_poly import DifferenceLaurentPolynomial
from .nevanlinna import pole_floor
from .pl_core import Exponential, FinitePL, TropicalPL, constant, tropical_plus


def random_finite(
    rng: np.random.Generator,
    n_breaks: tuple[int, int] = (3, 12),
    slope_range: float = 5.0,
    x_range: float = 10.0,
    value_range: float = 5.0,
) -> FinitePL:
    """Finite PL function with 3-12 breakpoints and slopes in ``[-5, 5]``."""
    n = int(rng.integers(n_breaks[0], n_breaks[1] + 1))
    xs = np.sort(rng.uniform(-x_range, x_range, n))
    # keep breakpoints well separated so that each one survives deduplication
    xs = xs + np.arange(n) * 1e-3
    slopes = rng.uniform(-slope_range, slope_range, n + 1)
    ys = np.empty(n)
    ys[0] = rng.uniform(-value_range, value_range)
    ys[1:] = ys[0] + np.cumsum(slopes[1:-1] * np.diff(xs))
    return FinitePL(np.column_stack((xs, ys)), slopes[0], slopes[-1])


def random_targets(
    rng: np.random.Generator,
    f: TropicalPL,
    q: int,
    window: float,
    margin: float = 0.1,
    spread: float = 5.0,
) -> list[float]:
    """``q`` distinct targets strictly below ``L_f`` on ``[-window, window]`` minus ``margin``."""
    floor = pole_floor(f, window)
    top = floor - margin if math.isfinite(floor) else spread
    values = top - rng.uniform(0.0, spread, q)
    while len(set(values.tolist())) < q:
        values = top - rng.uniform(0.0, spread, q)
    return values.tolist()


def random_periodic(rng: np.random.Generator, n_events: tuple[int, int] = (2, 5), weight: float = 2.0) -> TropicalPL:
    """Periodic function with random zero-sum events on a random period."""
    from .special_functions import PeriodicSpec, build_periodic

    period = float(rng.uniform(0.5, 3.0))
    n = int(rng.integers(n_events[0], n_events[1] + 1))
    locs = np.sort(rng.uniform(0.0, period, n))
    locs = locs + np.arange(n) * 1e-3 * period / n
    w = rng.uniform(-weight, weight, n)
    w[0] -= w.sum()
    return build_periodic(PeriodicSpec(list(zip(locs.tolist(), w.tolist())), float(rng.uniform(-2, 2)), period))


def random_function(rng: np.random.Generator, wrappers: bool = True) -> TropicalPL:
    """A finite PL function, sometimes plus a periodic or exponential summand."""
    f = random_finite(rng)
    if not wrappers:
        return f
    kind = rng.uniform()
    if kind < 0.15:
        return f + random_periodic(rng)
    if kind < 0.3:
        alpha = float(rng.uniform(1.2, 2.0)) * (1 if rng.uniform() < 0.7 else -1)
        return f + Exponential(alpha).shift(float(rng.uniform(-1, 1))) * float(rng.uniform(0.05, 0.5))
    return f


def random_poly(
    rng: np.random.Generator,
    n_shifts: int = 2,
    n_terms: int = 3,
    lam_range: tuple[float, float] = (-2.0, 3.0),
    coeff_range: float = 3.0,
) -> DifferenceLaurentPolynomial:
    """Laurent polynomial with constant coefficients and 2-decimal multi-indices."""
    shifts = [0.0] + sorted(np.round(rng.uniform(0.1, 2.0, n_shifts - 1), 3).tolist())
    shifts = list(dict.fromkeys(shifts))
    terms: dict = {}
    while len(terms) < n_terms:
        lam = tuple(np.round(rng.uniform(*lam_range, len(shifts)), 2).tolist())
        terms[lam] = float(rng.uniform(-coeff_range, coeff_range))
    return DifferenceLaurentPolynomial(shifts, terms)


def random_degree_zero_poly(rng: np.random.Generator, n_terms: int = 3) -> DifferenceLaurentPolynomial:
    """Degree-0 polynomial in ``f(x)`` and one shift; lower terms have negative norm."""
    shifts = [0.0, float(np.round(rng.uniform(0.1, 2.0), 3))]
    terms: dict = {}
    a = float(np.round(rng.uniform(-2, 2), 3))
    terms[(a, -a)] = float(rng.uniform(-3, 3))
    while len(terms) < n_terms:
        a = float(np.round(rng.uniform(-2, 2), 3))
        b = float(np.round(-a - rng.uniform(0.0, 2.0), 3))
        terms[(a, b)] = float(rng.uniform(-3, 3))
    return DifferenceLaurentPolynomial(shifts, terms)


def random_annihilator(rng: np.random.Generator, f: TropicalPL, n_terms: int = 3) -> DifferenceLaurentPolynomial:
    """Polynomial with ``P(x, f) = 0`` identically and nonzero norms.

    Each coefficient is ``-sum_j lam_j f(x + c_j) - d`` with ``d >= 0`` and
    ``d = 0`` for the first term, so the max over terms is exactly 0.
    """
    shifts = [0.0] + sorted(set(np.round(rng.uniform(0.1, 2.0, int(rng.integers(1, 3))), 2).tolist()))
    terms: dict = {}
    while len(terms) < n_terms:
        lam = tuple(np.round(rng.uniform(-2, 3, len(shifts)), 2).tolist())
        if abs(sum(lam)) < 0.05:
            continue
        d = 0.0 if not terms else float(rng.uniform(0, 2))
        parts = [constant(-d)] + [-(f.shift(c) * l) for c, l in zip(shifts, lam) if l]
        terms[lam] = tropical_plus(*parts)
    return DifferenceLaurentPolynomial(shifts, terms)


def random_first_order_equation(rng: np.random.Generator) -> dict:
    """``y(x+1) = c y(x)`` with ``|c|`` in ``(1.2, 3)`` or ``(0.3, 0.8)`` and 1-3 events."""
    mag = float(rng.uniform(1.2, 3.0) if rng.uniform() < 0.5 else rng.uniform(0.3, 0.8))
    c = mag if rng.uniform() < 0.6 else -mag
    n = int(rng.integers(1, 4))
    xs = np.sort(rng.uniform(0.0, 0.99, n)) + np.arange(n) * 1e-3
    return {"order": 1, "c": c, "events": [[float(x), float(rng.uniform(-2, 2))] for x in xs]}


def _periodic_events(rng: np.random.Generator, period: float = 1.0) -> list[list[float]]:
    n = int(rng.integers(2, 5))
    locs = np.sort(rng.uniform(0.0, 0.99 * period, n)) + np.arange(n) * 1e-3 * period
    w = rng.uniform(-2, 2, n)
    w[0] -= w.sum()
    return [[float(c), float(v)] for c, v in zip(locs, w)]


SECOND_ORDER_CASES = ("c=2", "c=-2", "|c|>2", "|c|<2", "delta")


def random_second_order_equation(rng: np.random.Generator, case: str) -> dict:
    """Random equation spec for one case of ``y(x+1) + y(x-1) = c y(x)``."""
    from .special_functions import PeriodicSpec, build_periodic

    if case == "c=2":
        return {
            "order": 2,
            "c": 2.0,
            "slope": float(rng.uniform(-2, 2)),
            "periodic": {"events": _periodic_events(rng), "anchor": float(rng.uniform(-1, 1))},
        }
    if case == "c=-2":
        terms = []
        for _ in range(int(rng.integers(1, 3))):
            x_j = float(rng.uniform(0, 1))
            events = _periodic_events(rng)
            g = build_periodic(PeriodicSpec([tuple(e) for e in events]))
            terms.append({"x": x_j, "xi": {"events": events, "anchor": -float(g(x_j))}})
        return {"order": 2, "c": -2.0, "xi_terms": terms}
    if case == "|c|>2":
        c = float(rng.uniform(2.2, 4.0)) * (1 if rng.uniform() < 0.5 else -1)
        fwd = [[float(rng.uniform(-1, 1)), float(rng.uniform(-2, 2))] for _ in range(int(rng.integers(1, 3)))]
        bwd = [[float(rng.uniform(-1, 1)), float(rng.uniform(-2, 2))] for _ in range(int(rng.integers(0, 3)))]
        return {"order": 2, "c": c, "forward": fwd, "backward": bwd}
    if case == "|c|<2":
        c = float(rng.uniform(-1.9, 1.9))
        terms = [[int(rng.integers(1, 3)), float(rng.uniform(-1, 1)), float(rng.uniform(-2, 2))] for _ in range(int(rng.integers(1, 4)))]
        return {"order": 2, "c": c, "trig_terms": terms}
    if case == "delta":
        terms = [["delta", float(rng.uniform(-1.5, 1.5)), float(rng.uniform(-2, 2))]]
        terms += [[int(rng.integers(1, 3)), float(rng.uniform(-1, 1)), float(rng.uniform(-2, 2))] for _ in range(int(rng.integers(0, 3)))]
        return {"order": 2, "c": -1.0, "trig_terms": terms}
    raise ValueError(f"unknown case {case!r}; expected one of {SECOND_ORDER_CASES}")
