import math
import warnings

import numpy as np
import pytest

from route_invariants.errors import ConfigError, DoublingNotFoundError, NonMinimalPeriodError, OrbitError
from route_invariants.henon import (
    HenonParams,
    OrbitSettings,
    ParameterPath,
    continue_orbit,
    detect_period_doubling,
    find_periodic_orbit,
    fixed_points,
    flip_parameter_fixed_point,
    flip_parameter_period_two,
    henon_step,
    locate_doubling,
    pick_up_daughter,
)

B = 0.3


def fixed_orbit(a: float, b: float = B):
    params = HenonParams(a, b)
    return find_periodic_orbit(params, 1, fixed_points(params)[0])


def test_henon_step_examples():
    params = HenonParams(1.4, B)
    assert henon_step(params, (0.0, 0.0)) == (1.4, 0.0)
    x, y = henon_step(params, (1.0, 1.0))
    assert x == pytest.approx(1.4 - 1.0 - 0.3)
    assert y == 1.0


def test_b_must_be_positive():
    with pytest.raises(ConfigError):
        HenonParams(1.0, 0.0)
    with pytest.raises(ConfigError):
        ParameterPath.fixed_b(B, 1.0, 1.0)


def test_fixed_point_newton_matches_closed_form():
    orbit = fixed_orbit(0.5)
    s = 1.0 + B
    expected = (-s + math.sqrt(s * s + 2.0)) / 2.0
    assert orbit.points[0][0] == pytest.approx(expected, abs=1e-10)
    assert orbit.points[0][1] == pytest.approx(expected, abs=1e-10)
    assert orbit.residual < 1e-11
    assert orbit.crossing_value > 0


def test_multipliers_multiply_to_b_power():
    for period, seed_a in ((1, 0.9), (2, 1.5)):
        if period == 1:
            orbit = fixed_orbit(seed_a)
        else:
            s = 1.0 + B
            root = math.sqrt(s * s - 4.0 * (s * s - seed_a))
            orbit = find_periodic_orbit(HenonParams(seed_a, B), 2, ((s + root) / 2, (s - root) / 2))
        product = orbit.multipliers[0] * orbit.multipliers[1]
        assert abs(product - B ** period) < 1e-8


def test_non_minimal_period_is_reported():
    params = HenonParams(0.5, B)
    with pytest.raises(NonMinimalPeriodError) as excinfo:
        find_periodic_orbit(params, 2, fixed_points(params)[0])
    assert excinfo.value.divisor == 1


def test_divergence_is_an_orbit_error():
    with pytest.raises(OrbitError):
        find_periodic_orbit(HenonParams(1.0, B), 3, (1e5, -1e5), OrbitSettings(max_iterations=5))


def test_escaping_seed_fails_before_the_monodromy_overflows():
    settings = OrbitSettings(max_iterations=5, divergence_radius=math.inf)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        with pytest.raises(OrbitError):
            find_periodic_orbit(HenonParams(1.0, B), 12, (1e5, -1e5), settings)


def test_first_doubling_matches_closed_form():
    target = flip_parameter_fixed_point(B)
    assert target == pytest.approx(1.2675)
    found = detect_period_doubling(HenonParams(0.5, B), HenonParams(1.45, B), fixed_orbit(0.5))
    assert abs(found.params.a - target) < 1e-6


def test_doubling_does_not_depend_on_the_bracket():
    a_values = []
    for a_min, a_max in ((0.5, 1.45), (1.0, 2.0), (1.2, 1.3)):
        found = detect_period_doubling(HenonParams(a_min, B), HenonParams(a_max, B), fixed_orbit(a_min))
        a_values.append(found.params.a)
    assert max(a_values) - min(a_values) < 1e-6


def test_no_crossing_in_bracket():
    with pytest.raises(DoublingNotFoundError):
        detect_period_doubling(HenonParams(0.5, B), HenonParams(1.0, B), fixed_orbit(0.5))


def test_continue_orbit_reaches_the_end():
    path = ParameterPath.fixed_b(B, 0.5, 1.0)
    steps = list(continue_orbit(path, fixed_orbit(0.5), 0.0, 1.0))
    s_last, last = steps[-1]
    assert s_last == pytest.approx(1.0)
    assert last.params.a == pytest.approx(1.0)
    assert np.allclose(last.points[0], fixed_points(HenonParams(1.0, B))[0], atol=1e-9)


def test_second_doubling_follows_the_period_two_branch():
    path = ParameterPath.fixed_b(B, 0.5, 2.1)
    first = locate_doubling(path, fixed_orbit(0.5))
    s, daughter = pick_up_daughter(path, first)
    assert daughter.period == 2
    assert s > first.s

    second = locate_doubling(path, daughter, s_from=s, initial_step=s - first.s)
    assert abs(second.params.a - flip_parameter_period_two(B)) < 1e-6
    assert second.params.a == pytest.approx(1.8125, abs=1e-6)
