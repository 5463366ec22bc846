import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropical_nevanlinna import (
    FinitePL,
    breakpoints_in,
    constant,
    eval_at,
    linear,
    make_exponential,
    make_pi,
    negate,
    one_sided_slopes,
    positive_part,
    reflect,
    shift,
    tropical_max,
    tropical_minus,
    tropical_plus,
    tropical_scale,
)
from tropical_nevanlinna.errors import BreakpointBudgetExceeded, InvalidParameters, InvalidSpec, WindowExceeded
from tropical_nevanlinna.nevanlinna import characteristic_value
from tropical_nevanlinna.pl_core import Exponential, PeriodicExtension, event_arrays, restrict, slope_equal

from .oracles import e_alpha_closed, numeric_slopes, pi_closed, random_known

minus_abs = FinitePL([(0.0, 0.0)], 1.0, -1.0)


def known_function(seed):
    k = random_known(np.random.default_rng(seed))
    return k, FinitePL(k.points(), k.slopes[0], k.slopes[-1])


# --- evaluation ------------------------------------------------------------


def test_minus_abs_value():
    assert eval_at(minus_abs, 2.0) == -2.0


def test_e2_values():
    e2 = make_exponential(2.0)
    assert e2(0.5) == 1.5
    assert e2(3.0) == 8.0


def test_scalar_and_array_dispatch():
    assert isinstance(minus_abs(1.0), float)
    out = minus_abs(np.array([[1.0, -2.0], [0.0, 3.0]]))
    assert out.shape == (2, 2)
    np.testing.assert_array_equal(out, [[-1.0, -2.0], [0.0, -3.0]])


@pytest.mark.parametrize("seed", range(20))
def test_finite_matches_loop_evaluation(seed):
    k, f = known_function(seed)
    xs = np.random.default_rng(seed + 100).uniform(-15, 15, 200)
    np.testing.assert_allclose(f(xs), [k(x) for x in xs], rtol=1e-12, atol=1e-9)


@pytest.mark.parametrize("alpha", [2.0, 3.0, -2.0, 0.5, -0.5, 1.7])
def test_exponential_matches_closed_form(alpha):
    e = make_exponential(alpha)
    xs = np.linspace(-6.3, 6.7, 301)
    np.testing.assert_allclose(e(xs), [e_alpha_closed(alpha, x) for x in xs], rtol=1e-12, atol=1e-12)


def test_e_half_on_unit_cell():
    e = make_exponential(0.5)
    xs = np.linspace(0.0, 0.99, 50)
    np.testing.assert_allclose(e(xs), -xs + 2.0)


def test_exponential_overflow_is_an_error():
    with pytest.raises(WindowExceeded):
        make_exponential(10.0)(400.0)


@pytest.mark.parametrize("alpha", [0.0, 1.0, -1.0])
def test_exponential_rejects_degenerate_base(alpha):
    with pytest.raises(InvalidParameters):
        make_exponential(alpha)


def test_finite_rejects_bad_points():
    with pytest.raises(InvalidSpec):
        FinitePL([], 0.0, 0.0)
    with pytest.raises(InvalidSpec):
        FinitePL([(0.0, 1.0), (0.0, 2.0)], 0.0, 0.0)
    with pytest.raises(InvalidSpec):
        FinitePL([(0.0, math.inf)], 0.0, 0.0)


def test_finite_arrays_are_read_only():
    with pytest.raises(ValueError):
        minus_abs.xs[0] = 1.0


# --- slopes ----------------------------------------------------------------


def test_slopes_examples():
    assert one_sided_slopes(minus_abs, 0.0) == (1.0, -1.0)
    assert one_sided_slopes(make_exponential(2.0), 1.0) == (1.0, 2.0)
    assert one_sided_slopes(make_pi(-1, -1), 0.5) == pytest.approx((0.5, -0.5))


@pytest.mark.parametrize("seed", range(10))
def test_slopes_match_finite_differences(seed):
    k, f = known_function(seed)
    for x in k.xs:
        left, right = f.slopes(x)
        nl, nr = numeric_slopes(k, x, 1e-7)
        assert left == pytest.approx(nl, abs=1e-5)
        assert right == pytest.approx(nr, abs=1e-5)


def test_slope_equality_is_relative():
    assert slope_equal(1e12, 1e12 + 10.0)
    assert not slope_equal(1.0, 1.0 + 1e-6)


# --- breakpoints ------------------------------------------------------------


def test_minus_abs_single_pole():
    (ev,) = breakpoints_in(minus_abs, -5, 5)
    assert (ev.x, ev.omega, ev.kind, ev.tau) == (0.0, -2.0, "pole", 2.0)
    assert ev.is_pole


@pytest.mark.parametrize("seed", range(15))
def test_breakpoints_match_construction(seed):
    k, f = known_function(seed)
    events = breakpoints_in(f, -20, 20)
    assert [e.x for e in events] == pytest.approx(k.xs)
    assert [e.omega for e in events] == pytest.approx(k.omegas())


@pytest.mark.parametrize("alpha", [-2.0, -3.0])
def test_negative_exponential_events(alpha):
    events = breakpoints_in(make_exponential(alpha), -4.5, 4.5)
    assert [e.x for e in events] == list(range(-4, 5))
    for e in events:
        assert e.omega == pytest.approx(alpha ** e.x * (1 - 1 / alpha))


@pytest.mark.parametrize("a,b", [(-1, -1), (-1, -2), (2, 3)])
def test_pi_events(a, b):
    events = breakpoints_in(make_pi(a, b), -2.0, 1.999)
    roots = [e.x for e in events if e.omega > 0]
    poles = [e.x for e in events if e.omega < 0]
    assert roots == pytest.approx([-2, -1, 0, 1])
    assert poles == pytest.approx([p + b / (a + b) for p in (-2, -1, 0, 1)])
    assert all(abs(abs(e.omega) - 1) < 1e-12 for e in events)


def test_pi_matches_definition():
    for a, b in [(-1, -1), (-1, -2), (2, 3)]:
        f = make_pi(a, b)
        xs = np.random.default_rng(1).uniform(-5, 5, 1000)
        np.testing.assert_allclose(f(xs), [pi_closed(a, b, x) for x in xs], atol=1e-14)
        np.testing.assert_allclose(f(xs + 1), f(xs), atol=1e-12)


def test_pi_sign_mismatch():
    with pytest.raises(InvalidParameters):
        make_pi(-1, 2)


def test_breakpoints_sorted_and_separated():
    f = tropical_max(make_pi(-1, -2), linear(0.1, 0.05), make_exponential(1.5) * 0.01)
    xs = [e.x for e in breakpoints_in(f, -10, 10)]
    assert xs == sorted(xs)
    assert np.all(np.diff(xs) > 1e-9)


def test_budget_is_enforced():
    with pytest.raises(BreakpointBudgetExceeded):
        breakpoints_in(make_pi(-1, -1), -1000, 1000, budget=100)


def test_sub_eps_slope_jump_is_not_a_breakpoint():
    f = FinitePL([(0.0, 0.0), (1.0, 1.0)], 1.0, 1.0 + 1e-12)
    assert [e.x for e in breakpoints_in(f, -5, 5)] == []


def test_empty_window_rejected():
    with pytest.raises(InvalidParameters):
        breakpoints_in(minus_abs, 1.0, 1.0)


# --- combinators -------------------------------------------------------------


def test_max_with_constant():
    f = tropical_max(linear(1.0), 0.5)
    assert f(2.0) == 2.0
    assert f(0.0) == 0.5
    (ev,) = breakpoints_in(f, -3, 3)
    assert ev.x == pytest.approx(0.5)
    assert ev.omega == pytest.approx(1.0)


def test_max_of_crossing_lines_creates_root():
    f = tropical_max(linear(2.0, -1.0), linear(-1.0, 2.0))
    (ev,) = breakpoints_in(f, -10, 10)
    assert ev.x == pytest.approx(1.0)
    assert (ev.left_slope, ev.right_slope) == (-1.0, 2.0)


def test_scale_of_identity():
    for c in (-3.0, 0.5, 2.0):
        g = tropical_scale(linear(1.0), c)
        assert characteristic_value(g, 7.0) == pytest.approx(abs(c) * 7.0 / 2)


def test_shift_quotient_of_e2_is_e2():
    e2 = make_exponential(2.0)
    q = tropical_minus(shift(e2, 1.0), e2)
    xs = np.linspace(-10, 10, 2001)
    np.testing.assert_allclose(q(xs), [e_alpha_closed(2.0, x) for x in xs], rtol=1e-12)


def test_positive_part_examples():
    assert np.all(positive_part(minus_abs)(np.linspace(-5, 5, 11)) == 0)
    (ev,) = breakpoints_in(positive_part(linear(1.0)), -3, 3)
    assert (ev.x, ev.omega) == (0.0, 1.0)


def test_positive_part_of_decaying_exponential():
    e = make_exponential(-0.5)
    xs = np.linspace(-7, 7, 5001)
    np.testing.assert_allclose(positive_part(e)(xs), np.maximum([e_alpha_closed(-0.5, x) for x in xs], 0.0))
    clipped = [ev.x for ev in breakpoints_in(positive_part(e), -7, 7) if not float(ev.x).is_integer()]
    assert clipped, "negative lobes should be clipped inside cells"


def test_reflection_identity():
    for alpha in (2.0, -3.0, 1.5):
        e, inv = make_exponential(alpha), make_exponential(1 / alpha)
        xs = np.random.default_rng(0).uniform(-8, 8, 1000)
        np.testing.assert_allclose(reflect(e)(xs), inv(xs) / alpha, rtol=1e-12, atol=1e-12)


def test_reflect_swaps_slopes():
    f = reflect(FinitePL([(1.0, 0.0)], 2.0, -3.0))
    assert f.slopes(-1.0) == (3.0, -2.0)


def test_negate_turns_poles_into_roots():
    (ev,) = breakpoints_in(negate(minus_abs), -1, 1)
    assert ev.kind == "root"


def test_restrict_matches_original():
    f = tropical_max(make_pi(-1, -1), linear(0.2, -0.3))
    g = restrict(f, -4.0, 4.0)
    xs = np.linspace(-4, 4, 801)
    np.testing.assert_allclose(g(xs), f(xs), atol=1e-12)


def test_periodic_extension_checks_continuity():
    with pytest.raises(InvalidSpec):
        PeriodicExtension([(0, 0), (0.5, 1), (1, 0.5)])
    anti = PeriodicExtension([(0, 0), (0.5, 1), (1, 0)], multiplier=-1.0)
    assert anti(1.5) == pytest.approx(-1.0)


def test_exponential_is_periodic_extension():
    assert isinstance(make_exponential(2.0), Exponential)
    assert make_exponential(2.0).to_spec() == {"kind": "exponential", "alpha": 2.0}


# --- properties ------------------------------------------------------------


reals = st.floats(-10, 10, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.floats(-3, 3), st.floats(-3, 3))
def test_omega_is_linear(seed, A, B):
    _, f = known_function(seed)
    _, g = known_function(seed + 1)
    h = A * f + B * g
    xs = np.concatenate((f.xs, g.xs))
    lf, rf = f.slopes(xs)
    lg, rg = g.slopes(xs)
    lh, rh = h.slopes(xs)
    np.testing.assert_allclose(rh - lh, A * (rf - lf) + B * (rg - lg), atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), reals)
def test_semiring_laws(seed, x):
    _, f = known_function(seed)
    _, g = known_function(seed + 1)
    _, h = known_function(seed + 2)
    assert tropical_max(f, g)(x) == tropical_max(g, f)(x)
    assert tropical_max(f, f)(x) == pytest.approx(f(x))
    assert tropical_max(tropical_max(f, g), h)(x) == tropical_max(f, tropical_max(g, h))(x)
    assert tropical_plus(f, g)(x) == pytest.approx(tropical_plus(g, f)(x))
    assert tropical_plus(tropical_plus(f, g), h)(x) == pytest.approx(tropical_plus(f, tropical_plus(g, h))(x))
    lhs = tropical_plus(f, tropical_max(g, h))(x)
    rhs = tropical_max(tropical_plus(f, g), tropical_plus(f, h))(x)
    assert lhs == pytest.approx(rhs, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.floats(-5, 5), st.floats(-5, 5), reals)
def test_shift_composes(seed, a, b, x):
    _, f = known_function(seed)
    assert shift(shift(f, a), b)(x) == pytest.approx(shift(f, a + b)(x), abs=1e-9)


@pytest.mark.parametrize("seed", range(10))
def test_continuity_at_breakpoints(seed):
    f = tropical_max(known_function(seed)[1], make_pi(-1, -2) * 3.0 - 1.0)
    h = math.sqrt(1e-9)
    xs, left, right = event_arrays(f, -10, 10)
    assert np.all(np.abs(f(xs - h) + h * left - f(xs)) <= 1e-9 * np.maximum(1, np.abs(f(xs))))
    assert np.all(np.abs(f(xs + h) - h * right - f(xs)) <= 1e-9 * np.maximum(1, np.abs(f(xs))))


@pytest.mark.parametrize("seed", range(10))
def test_affine_between_breakpoints(seed):
    f = tropical_max(known_function(seed)[1], make_exponential(-2.0) * 0.1)
    xs, _, _ = event_arrays(f, -6, 6)
    knots = np.concatenate(([-6.0], xs, [6.0]))
    mid = (knots[1:] + knots[:-1]) / 2
    chord = (f(knots[1:]) + f(knots[:-1])) / 2
    np.testing.assert_allclose(f(mid), chord, rtol=1e-9, atol=1e-9)


def test_difference_without_breakpoints_is_affine():
    # f and g carry the same pi-jumps on [2, 3], so f - g is affine there
    f = make_pi(-1, -1) + linear(0.3)
    g = make_pi(-1, -1) * 1.0 + 2.0
    d = f - g
    assert breakpoints_in(d, 2.0, 3.0) == []
    xs = np.random.default_rng(0).uniform(2, 3, 100)
    chord = d(2.0) + (xs - 2.0) * (d(3.0) - d(2.0))
    np.testing.assert_allclose(d(xs), chord, atol=1e-12)


def test_operator_sugar():
    f = linear(1.0)
    assert (f + 1)(2.0) == 3.0
    assert (1 - f)(2.0) == -1.0
    assert (-f)(2.0) == -2.0
    assert (2 * f)(2.0) == 4.0
    assert constant(3.0)(100.0) == 3.0


def test_max_keeps_crossings_on_steep_segments():
    # e_{-1/2} has slopes near 1e12 around x = -40; both crossings of -1 must survive
    g = tropical_max(make_exponential(-0.5), -1.0)
    events = breakpoints_in(g, -41.0, -39.0)
    roots = [e for e in events if e.omega > 0]
    assert [round(e.x, 6) for e in roots] == pytest.approx([-40.333333, -39.333333], abs=1e-5)
    assert sum(e.omega for e in roots) == pytest.approx(3 * 4.0**20, rel=1e-9)
