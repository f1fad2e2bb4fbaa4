import math

import numpy as np
import pytest

from bcsgap import (OutOfRange, Params, SimpleGapProblem, critical_temperature, delta_at,
                    delta_curve, delta_inverse, derivative_probe, gap_at_zero, invert_delta)
from bcsgap.simple_gap import gap_residual

from oracles import oracle_delta, oracle_tau


@pytest.fixture(scope="module")
def p1():
    return SimpleGapProblem(0.3, Params())


@pytest.fixture(scope="module")
def p2():
    return SimpleGapProblem(0.35, Params())


def test_critical_temperature_residual(p1):
    tau = critical_temperature(p1)
    assert abs(gap_residual(p1, 0.0, tau)) < 1e-9


def test_critical_temperature_order(p1, p2):
    assert critical_temperature(p1) < critical_temperature(p2)


def test_critical_temperature_matches_bisection_oracle(p1):
    assert critical_temperature(p1) == pytest.approx(oracle_tau(0.3), abs=1e-6)


def test_gap_at_zero_closed_form():
    p = SimpleGapProblem(1 / math.asinh(1.0), Params())
    assert gap_at_zero(p) == pytest.approx(1.0, rel=1e-15)


def test_gap_at_zero_solves_zero_temperature_equation(p1):
    d = gap_at_zero(p1)
    assert d == 1 / math.sinh(10 / 3)
    # at T = 0 the integral is arcsinh(h / delta)
    assert 0.3 * math.asinh(1.0 / d) == pytest.approx(1.0, abs=1e-14)


def test_gap_at_zero_monotone_in_coupling():
    P = Params()
    g = [gap_at_zero(SimpleGapProblem(u, P)) for u in (0.27, 0.3, 0.35)]
    assert g[0] < g[1] < g[2]


def test_delta_endpoints(p1):
    assert delta_at(p1, 0.0) == pytest.approx(gap_at_zero(p1), abs=1e-12)
    tau = critical_temperature(p1)
    assert delta_at(p1, tau) == 0.0
    assert delta_at(p1, 1.5 * tau) == 0.0


def test_delta_strictly_decreasing(p1):
    tau = critical_temperature(p1)
    ts = np.linspace(0.2, 0.99, 12) * tau
    vals = [delta_at(p1, t) for t in ts]
    assert np.all(np.diff(vals) < 0)


def test_delta_residual(p1):
    for t in np.linspace(0, 0.999, 9) * critical_temperature(p1):
        d = delta_at(p1, t)
        assert abs(gap_residual(p1, d, t)) < p1.params.root_tol


def test_delta_against_oracle(p1):
    t = 0.6 * critical_temperature(p1)
    assert delta_at(p1, t) == pytest.approx(oracle_delta(0.3, t, n=400_000), abs=1e-9)


def test_delta_rejects_negative_temperature(p1):
    with pytest.raises(OutOfRange):
        delta_at(p1, -1e-3)


def test_curve_single_node(p1):
    c = delta_curve(p1, [0.0])
    assert c.values.tolist() == [delta_at(p1, 0.0)]


def test_curve_reaches_zero_at_tau(p1):
    tau = critical_temperature(p1)
    c = delta_curve(p1, np.linspace(0, tau, 17))
    assert c.values[-1] == 0.0
    pos = c.values > 0
    assert np.all(np.diff(c.values[pos]) < 0) or pos.sum() < 2
    # flat region near T = 0 is exponentially small: strict decrease from T > 0.1 tau
    assert np.all(np.diff(c.values[2:]) < 0)


def test_curve_rejects_bad_grid(p1):
    with pytest.raises(ValueError):
        delta_curve(p1, [0.01, 0.0])


def test_inverse_endpoints(p1):
    c = delta_curve(p1, np.linspace(0, critical_temperature(p1), 9))
    assert delta_inverse(c, c.values[0]) == 0.0
    assert delta_inverse(c, 0.0) == c.tau
    with pytest.raises(OutOfRange):
        delta_inverse(c, 2 * c.values[0])


def test_inverse_round_trip(p1):
    c = delta_curve(p1, np.linspace(0, critical_temperature(p1), 9))
    rng = np.random.default_rng(7)
    for v in rng.uniform(0, c.values[0], 20):
        t = delta_inverse(c, v)
        assert abs(delta_at(p1, t) - v) <= 2 * p1.params.root_tol


def test_invert_delta_matches_curve_inverse(p1):
    c = delta_curve(p1, np.linspace(0, critical_temperature(p1), 5))
    v = 0.5 * c.values[0]
    assert invert_delta(p1, v) == pytest.approx(delta_inverse(c, v), abs=1e-12)


def test_slope_flat_at_zero(p1):
    tau = critical_temperature(p1)
    s2 = abs(derivative_probe(p1, 0.0, 1e-2 * tau))
    s3 = abs(derivative_probe(p1, 0.0, 1e-3 * tau))
    assert s3 <= s2 < 0.05


def test_slope_diverges_at_tau(p1):
    tau = critical_temperature(p1)
    s = [abs(derivative_probe(p1, tau - e * tau, e * tau / 4)) for e in (1e-2, 1e-3)]
    assert s[1] > s[0]


def test_slope_negative_midway(p1):
    tau = critical_temperature(p1)
    assert derivative_probe(p1, tau / 2, 1e-3 * tau) < 0


def test_lower_curve_below_upper(p1, p2):
    tau2 = critical_temperature(p2)
    for t in np.linspace(0, tau2, 20, endpoint=False):
        assert delta_at(p1, t) < delta_at(p2, t)
    assert delta_at(p1, tau2) == delta_at(p2, tau2) == 0.0
