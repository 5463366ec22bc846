import io
import math

import numpy as np
import pytest

from tropical_nevanlinna import (
    FinitePL,
    characteristic,
    characteristic_value,
    constant,
    count_poles,
    counting,
    estimate_growth,
    linear,
    make_exponential,
    make_pi,
    pole_floor,
    proximity,
    root_floor,
    sweep,
    tropical_max,
    tropical_plus,
    tropical_scale,
    verify_jensen,
    verify_poisson_jensen,
)
from tropical_nevanlinna.nevanlinna import fmt_defect, verify_first_main, write_sweep_csv

from .oracles import KnownPL, n_from_poles, proximity_direct, random_known, trapezoid_counting

minus_abs = FinitePL([(0.0, 0.0)], 1.0, -1.0)


def finite(k: KnownPL) -> FinitePL:
    return FinitePL(k.points(), k.slopes[0], k.slopes[-1])


# --- proximity ---------------------------------------------------------------


def test_proximity_of_affine():
    assert proximity(linear(2.0, 3.0), 5.0) == pytest.approx(0.5 * (13.0 + 0.0))
    assert proximity(linear(2.0, 3.0), 1.5) == pytest.approx(3.0)


def test_proximity_of_minus_abs_is_zero():
    np.testing.assert_array_equal(proximity(minus_abs, np.linspace(0.1, 50, 20)), 0.0)


@pytest.mark.parametrize("r", [1.0, 2.25, 3.5, 7.9, 12.0])
def test_e2_proximity_closed_form(r):
    m, eps = math.floor(r), r - math.floor(r)
    expected = 0.5 * (2.0**m * (eps + 1) + 2.0 ** (-m - 1) * (1 - eps + 1))
    assert proximity(make_exponential(2.0), r) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_proximity_matches_direct(seed):
    k = random_known(np.random.default_rng(seed))
    f = finite(k)
    for r in (0.5, 3.0, 11.0, 25.0):
        assert proximity(f, r) == pytest.approx(proximity_direct(k, r), rel=1e-12, abs=1e-12)


def test_radius_must_be_positive():
    with pytest.raises(ValueError):
        proximity(minus_abs, 0.0)
    with pytest.raises(ValueError):
        counting(minus_abs, -1.0)


# --- counting --------------------------------------------------------------------


def test_minus_abs_counts():
    assert count_poles(minus_abs, 1.0) == 2.0
    assert count_poles(minus_abs, 0.0) == 0.0
    assert counting(minus_abs, 3.0) == 3.0


def test_boundary_pole_is_excluded():
    f = FinitePL([(2.0, 0.0)], 1.0, -1.0)
    assert count_poles(f, 2.0) == 0.0
    assert count_poles(f, 2.0 + 1e-9) == 2.0


@pytest.mark.parametrize("seed", range(12))
def test_counting_matches_quadrature(seed):
    rng = np.random.default_rng(seed)
    k = random_known(rng)
    f = finite(k)
    poles = k.poles()
    for r in (4.0, 9.5, 17.0):
        exact = counting(f, r)
        quad = trapezoid_counting(lambda t: n_from_poles(poles, t), r, jumps=[abs(b) for b, _ in poles])
        assert exact == pytest.approx(quad, rel=1e-6, abs=1e-12)
        assert count_poles(f, r) == pytest.approx(n_from_poles(poles, r))


def test_counting_with_five_poles_matches_quadrature():
    xs = [-6.0, -3.5, -1.0, 0.5, 2.0, 4.5, 7.0, 8.0, 9.0]
    slopes = [4.0, 2.0, 3.0, 1.0, 2.5, 0.0, 1.0, -1.0, 0.0, -2.0]
    k = KnownPL(xs, slopes, 0.0)
    assert len(k.poles()) == 5
    f = finite(k)
    for r in (3.0, 8.5, 12.0):
        quad = trapezoid_counting(lambda t: n_from_poles(k.poles(), t), r, jumps=[abs(b) for b, _ in k.poles()])
        assert counting(f, r) == pytest.approx(quad, rel=1e-6)


def test_minus_pi_pole_count_pattern():
    f = -make_pi(-1, -1)
    for t in (0.3, 1.2, 2.7, 5.5, 10.01):
        assert count_poles(f, t) == pytest.approx(2 * math.floor(t) + 1)


def test_minus_pi_counting_is_quadratic():
    f = -make_pi(-1, -1)
    for r in (50.0, 200.0, 400.0):
        N = counting(f, r)
        assert abs(N - r * r / 2) <= r
    # integral of [t] plus r/2 at integer radius
    assert counting(f, 10.0) == pytest.approx(45.0 + 5.0)


@pytest.mark.parametrize("alpha", [-2.0, -3.0, -1.5])
def test_negative_exponential_root_count_closed_form(alpha):
    # roots of e_alpha sit at even integers, so they are the poles of -e_alpha
    f = -make_exponential(alpha)
    for ell in (1, 2, 3):
        t = 2 * ell + 1.3
        expected = (1 - 1 / alpha) * (alpha**2 / (alpha**2 - 1) * alpha ** (2 * ell) + alpha ** (-2 * ell) / (1 - alpha**2))
        assert count_poles(f, t) == pytest.approx(expected, rel=1e-12)


def test_negative_exponential_pole_counts_match_sum():
    alpha = -2.0
    f = make_exponential(alpha)
    for t in (0.5, 1.5, 3.2, 6.7):
        expected = sum(abs(alpha) ** k * (1 - 1 / alpha) for k in range(-7, 8) if k % 2 and abs(k) < t)
        assert count_poles(f, t) == pytest.approx(expected, rel=1e-12)


# --- characteristic ----------------------------------------------------------------


def test_characteristic_assembles_sample():
    s = characteristic(minus_abs, 3.0)
    assert (s.r, s.m, s.n_poles, s.N, s.T) == (3.0, 0.0, 2.0, 3.0, 3.0)


@pytest.mark.parametrize("alpha,beta", [(1.0, 1.0), (2.0, 3.0), (0.5, 4.0)])
def test_affine_plateau_then_slope(alpha, beta):
    f = linear(alpha, beta)
    for r in np.linspace(0.05, 3 * beta / alpha, 30):
        expected = beta if r < beta / alpha else alpha * r / 2 + beta / 2
        assert characteristic_value(f, r) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("c", [-3.0, -0.4, 0.7, 5.0])
def test_linear_through_origin(c):
    rs = np.linspace(0.5, 40, 9)
    np.testing.assert_allclose(characteristic_value(linear(c), rs), abs(c) * rs / 2, rtol=1e-12)


def test_e2_has_no_poles():
    e2 = make_exponential(2.0)
    for r in (1.0, 4.0, 9.0):
        s = characteristic(e2, r)
        assert s.N == 0.0
        assert s.T == s.m


def test_array_and_scalar_agree():
    f = make_pi(-1, -2) + linear(0.3)
    rs = np.array([0.7, 2.0, 5.5, 13.0])
    arr = characteristic_value(f, rs)
    assert isinstance(characteristic_value(f, 2.0), float)
    np.testing.assert_allclose(arr, [characteristic_value(f, r) for r in rs], rtol=1e-14)


@pytest.mark.parametrize("seed", range(10))
def test_monotone_and_consistent_sweep(seed):
    k = random_known(np.random.default_rng(seed))
    f = finite(k)
    rs = np.linspace(0.1, 30, 300)
    samples = sweep(f, rs)
    T = np.array([s.T for s in samples])
    N = np.array([s.N for s in samples])
    assert np.all(np.diff(T) >= -1e-12)
    assert np.all(np.diff(N) >= -1e-12)
    for s in samples:
        assert s.T == s.m + s.N


@pytest.mark.parametrize("seed", range(10))
def test_pole_count_bounded_by_counting(seed):
    f = finite(random_known(np.random.default_rng(seed)))
    for r in np.linspace(0.5, 20, 40):
        for k in (1.5, 2.0, 4.0):
            assert count_poles(f, r) <= 2 * counting(f, k * r) / ((k - 1) * r) + 1e-9


def test_sweep_csv_round_trips():
    samples = sweep(make_pi(-1, -2), [0.5, 1.0 / 3.0, 7.25])
    buf = io.StringIO()
    write_sweep_csv(samples, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "r,m,n,N,T"
    assert len(lines) == 4
    r, m, n, N, T = map(float, lines[2].split(","))
    assert (r, m, n, N, T) == (samples[1].r, samples[1].m, samples[1].n_poles, samples[1].N, samples[1].T)


# --- algebraic properties of the functionals ---------------------------------


@pytest.mark.parametrize("seed", range(15))
def test_functional_subadditivity(seed):
    rng = np.random.default_rng(seed)
    f = finite(random_known(rng))
    g = finite(random_known(rng))
    fg = tropical_plus(f, g)
    rs = np.linspace(0.5, 25, 25)
    tol = 1e-9
    assert np.all(proximity(fg, rs) <= proximity(f, rs) + proximity(g, rs) + tol)
    assert np.all(counting(fg, rs) <= counting(f, rs) + counting(g, rs) + tol)
    assert np.all(characteristic_value(fg, rs) <= characteristic_value(f, rs) + characteristic_value(g, rs) + tol)
    for a in (0.0, 0.5, 3.0):
        np.testing.assert_allclose(proximity(tropical_scale(f, a), rs), a * proximity(f, rs), rtol=1e-12, atol=1e-12)
    upper = tropical_max(f, g)
    assert np.all(proximity(f, rs) <= proximity(upper, rs) + tol)


def test_counting_is_not_monotone_under_pointwise_order():
    # two peaks under one wider peak: f <= g yet f has more pole mass
    f = tropical_max(FinitePL([(1.0, 0.0)], 1.0, -1.0), FinitePL([(-1.0, 0.0)], 1.0, -1.0))
    g = FinitePL([(0.0, 1.0)], 1.0, -1.0)
    xs = np.linspace(-10, 10, 2001)
    assert np.all(f(xs) <= g(xs))
    for r in (3.0, 5.0, 20.0):
        assert counting(f, r) == pytest.approx(2 * (r - 1))
        assert counting(g, r) == pytest.approx(r)
        assert counting(f, r) > counting(g, r)


# --- Jensen and Poisson-Jensen -----------------------------------------------------


def test_jensen_minus_abs_exact():
    rep = verify_jensen(minus_abs, 3.0)
    assert rep.passed
    assert rep.lhs == [0.0]
    assert rep.rhs == [0.0]


def test_jensen_negative_half_exponential():
    f = make_exponential(-0.5)
    rep = verify_jensen(f, 7.3)
    assert rep.passed
    assert rep.lhs[0] == pytest.approx(f(0.0), abs=1e-8 * max(1.0, characteristic_value(f, 7.3)))


@pytest.mark.parametrize("seed", range(10))
def test_jensen_random(seed):
    rng = np.random.default_rng(seed)
    f = finite(random_known(rng))
    rep = verify_jensen(f, rng.uniform(0.1, 30, 20))
    assert rep.passed


def test_poisson_jensen_pi_fixture():
    rep = verify_poisson_jensen(make_pi(-1, -2), 4.7, 1.3)
    assert rep.passed


def test_poisson_jensen_affine_interpolates():
    f = linear(1.7, -0.4)
    for x in (-2.0, 0.0, 3.1):
        rep = verify_poisson_jensen(f, 4.0, x)
        assert rep.passed
        assert rep.rhs[0] == pytest.approx(1.7 * x - 0.4, abs=1e-14)


@pytest.mark.parametrize("seed", range(10))
def test_poisson_jensen_at_origin_matches_jensen(seed):
    rng = np.random.default_rng(seed)
    f = finite(random_known(rng))
    r = rng.uniform(1, 20)
    rep = verify_poisson_jensen(f, r, 0.0)
    assert rep.passed
    jensen_rhs = characteristic_value(f, r) - characteristic_value(-f, r)
    assert rep.rhs[0] == pytest.approx(jensen_rhs, abs=1e-9 * max(1, characteristic_value(f, r)))


@pytest.mark.parametrize("seed", range(10))
def test_poisson_jensen_random(seed):
    rng = np.random.default_rng(seed)
    f = finite(random_known(rng))
    r = rng.uniform(1, 20)
    assert verify_poisson_jensen(f, r, rng.uniform(-r, r) * 0.999).passed


def test_poisson_jensen_rejects_outside_point():
    with pytest.raises(ValueError):
        verify_poisson_jensen(minus_abs, 2.0, 2.0)


# --- floors -------------------------------------------------------------------------


def test_floors_examples():
    assert pole_floor(make_exponential(2.0), 10.0) == math.inf
    assert pole_floor(minus_abs, 5.0) == 0.0
    assert root_floor(FinitePL([(0.0, 0.0)], -1.0, 1.0), 5.0) == 0.0
    assert root_floor(make_pi(-1, -1), 6.0) == pytest.approx(0.0, abs=1e-15)


def test_floors_of_negative_half_exponential():
    f = make_exponential(-0.5)
    evens = [k for k in range(-8, 9) if k % 2 == 0]
    odds = [k for k in range(-9, 10) if k % 2]
    assert pole_floor(f, (-9.0, 9.0)) == pytest.approx(min(f(float(k)) for k in evens))
    assert root_floor(f, (-9.0, 9.0)) == pytest.approx(min(f(float(k)) for k in odds))
    assert pole_floor(f, (-9.0, 9.0)) == pytest.approx(min(f(8.0), f(-8.0)))


# --- first main theorem ---------------------------------------------------------------


@pytest.mark.parametrize("seed", range(12))
def test_first_main_random(seed):
    rng = np.random.default_rng(seed)
    f = finite(random_known(rng))
    a = rng.uniform(-8, 8)
    assert verify_first_main(f, a, rng.uniform(0.2, 25, 10)).passed


def test_first_main_band_below_pole_floor():
    f = -make_pi(-1, -1) + 2.0
    rs = np.linspace(0.5, 30, 40)
    for a in (-1.0, 0.5, 1.5):
        rep = verify_first_main(f, a, rs)
        assert rep.passed
        assert "defect-band" in rep.components
        eps = fmt_defect(f, a, rs)
        assert np.all(eps >= -1e-9)
        assert np.all(eps <= max(a, 0) + 1e-9)


def test_first_main_no_band_above_floor():
    rep = verify_first_main(minus_abs, 1.0, [2.0, 4.0])
    assert rep.passed
    assert "defect-band" not in rep.components


# --- growth -----------------------------------------------------------------------------


def test_order_of_minus_pi():
    est = estimate_growth(-make_pi(-1, -1), 10.0, 400.0, points=64)
    assert abs(est.order_slope - 2.0) <= 0.1
    assert not est.infinite_order


def test_hyper_order_of_e2():
    est = estimate_growth(make_exponential(2.0), 5.0, 60.0, points=64)
    assert abs(est.hyper_order_slope - 1.0) <= 0.05
    assert est.infinite_order


def test_order_of_affine():
    est = estimate_growth(linear(1.5, 2.0), 2.0, 1000.0, points=32)
    assert abs(est.order_slope - 1.0) <= 0.1
    assert not est.infinite_order


def test_growth_reports_undefined_hyper_order():
    est = estimate_growth(constant(0.5), 2.0, 100.0, points=16)
    assert est.hyper_order is None
    assert est.notes


def test_growth_validates_arguments():
    with pytest.raises(ValueError):
        estimate_growth(minus_abs, 10.0, 5.0)
    with pytest.raises(ValueError):
        estimate_growth(minus_abs, 2.0, 5.0, points=4)
