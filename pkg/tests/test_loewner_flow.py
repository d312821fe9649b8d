import math

import numpy as np
import pytest

from src.driver_library.service import (
    linear_driver, sqrt_driver, sqrt_slit, wang_lambda_down, zero_driver,
)
from src.loewner_flow.schema import Driver
from src.loewner_flow.service import (
    base_images, evolve_point_down, evolve_point_up, flow_path, hitting_time, holder_check,
    reverse_driver, scale_driver, tip_point, welding_endpoints,
)
from src.loewner_flow.trace import capacity_residual, is_simple, slit_endpoints, trace_curve, trace_grid
from src.utils import DriverEvaluationError, PreconditionError


def test_zero_driver_moves_point_along_imaginary_axis():
    point = evolve_point_down(zero_driver(), 2j, 0.5)
    assert point.alive
    assert point.position == pytest.approx(1j * math.sqrt(2.0), abs=1e-9)


def test_zero_driver_swallows_i_at_quarter():
    point = evolve_point_down(zero_driver(), 1j, 1.0)
    assert not point.alive
    assert point.swallow_time == pytest.approx(0.25, abs=1e-8)
    assert point.time == point.swallow_time


def test_up_flow_keeps_real_points_real():
    point = evolve_point_up(zero_driver(), 3.0, 1.0)
    assert point.alive
    assert point.position.imag == 0.0
    assert point.position.real == pytest.approx(math.sqrt(5.0), rel=1e-10)


def test_hitting_time_of_zero_driver():
    assert hitting_time(zero_driver(), 1.0) == pytest.approx(0.25, abs=1e-8)
    assert hitting_time(zero_driver(), -1.0) == pytest.approx(0.25, abs=1e-8)
    assert hitting_time(zero_driver(), 3.0) is None


@pytest.mark.parametrize("z0, t1", [
    (0.0, 0.5),
    (1.0 - 1j, 0.5),
    (2j, 1.5),
    (2j, -0.1),
])
def test_point_flow_preconditions(z0, t1):
    with pytest.raises(PreconditionError):
        evolve_point_down(zero_driver(), z0, t1)


def test_flow_path_matches_pointwise_flow():
    driver = linear_driver(1.0)
    times = np.linspace(0.0, 1.0, 11)
    path = flow_path(driver, 1.0 + 2j, times)
    assert path[0] == pytest.approx(1.0 + 2j)
    assert path[-1] == pytest.approx(evolve_point_down(driver, 1.0 + 2j, 1.0).position, abs=1e-9)
    assert np.all(path.imag > 0.0)


def test_flow_path_rejects_swallowed_point():
    with pytest.raises(PreconditionError):
        flow_path(zero_driver(), 1j, [0.1, 0.5])
    with pytest.raises(PreconditionError):
        flow_path(zero_driver(), 1j, [])


def test_scale_driver_rescales_time_and_values():
    base = linear_driver(2.0)
    scaled = scale_driver(base, 3.0)
    assert scaled.horizon == pytest.approx(9.0)
    assert scaled.scalar(4.5) == pytest.approx(3.0 * base.scalar(0.5))
    assert float(scaled.deriv(4.5)) == pytest.approx(2.0 / 3.0)
    with pytest.raises(PreconditionError):
        scale_driver(base, 0.0)


def test_reverse_driver():
    base = linear_driver(1.0, horizon=2.0)
    rev = reverse_driver(base, 2.0)
    assert rev.scalar(0.0) == 0.0
    assert rev.scalar(2.0) == pytest.approx(-2.0)
    unshifted = reverse_driver(base, 2.0, shift=False)
    assert unshifted.scalar(0.5) == pytest.approx(1.5)


def test_driver_samples_reject_nonfinite_values():
    driver = Driver(func=lambda t: 1.0 / np.asarray(t, dtype=float), horizon=1.0, label="pole")
    with np.errstate(divide="ignore"):
        with pytest.raises(DriverEvaluationError):
            driver.samples(np.array([0.0, 0.5]))


def test_central_difference_without_analytic_derivative():
    driver = Driver(func=lambda t: np.asarray(t, dtype=float) ** 2, horizon=1.0, label="square")
    assert not driver.has_derivative
    assert float(driver.deriv(0.5)) == pytest.approx(1.0, rel=1e-6)


def test_tip_point_of_vertical_slit():
    assert tip_point(zero_driver(), 1.0) == pytest.approx(2j, abs=1e-7)


def test_tip_point_reaches_wang_point(theta):
    driver = wang_lambda_down(theta)
    tip = tip_point(driver, driver.horizon)
    assert tip == pytest.approx(complex(math.cos(theta), math.sin(theta)), abs=1e-6)


@pytest.mark.parametrize("c", [-2.0, 0.5, 3.0])
def test_single_slit_matches_sqrt_slit(c):
    slit = sqrt_slit(c=c)
    trace = trace_curve(sqrt_driver(c), 1.0, n=1)
    assert math.atan2(trace.tip.imag, trace.tip.real) == pytest.approx(slit.angle, abs=1e-12)
    assert trace.tip == pytest.approx(tip_point(sqrt_driver(c), 1.0), abs=1e-6)

    ends = base_images(sqrt_driver(c), 1.0)
    assert ends.centered_left == pytest.approx(slit.weld_x, abs=1e-7)
    assert ends.centered_right == pytest.approx(slit.weld_y, abs=1e-7)


def test_zero_driver_trace_is_vertical():
    trace = trace_curve(zero_driver(), 1.0, n=500, samples=50)
    np.testing.assert_allclose(trace.points.real, 0.0, atol=1e-12)
    np.testing.assert_allclose(trace.points.imag, 2.0 * np.sqrt(trace.times), atol=1e-9)
    assert is_simple(trace)


def test_trace_capacity_is_twice_time():
    driver = wang_lambda_down(math.pi / 4.0)
    trace = trace_curve(driver, driver.horizon, n=2000)
    assert capacity_residual(trace) < 1e-8
    assert trace.graded is False
    assert is_simple(trace)


def test_trace_capacity_is_read_from_composed_map(monkeypatch):
    from src.loewner_flow import trace as trace_module

    exact = trace_module.slit_endpoints
    monkeypatch.setattr(trace_module, "slit_endpoints", lambda dl, dt: tuple(1.1 * v for v in exact(dl, dt)))
    trace = trace_curve(linear_driver(1.0), 1.0, n=400)
    assert trace.capacity == pytest.approx(2.0 * 1.21, rel=1e-6)
    assert capacity_residual(trace) > 0.4


def test_trace_preconditions():
    with pytest.raises(PreconditionError):
        trace_curve(zero_driver(), 2.0)
    with pytest.raises(PreconditionError):
        trace_curve(zero_driver(), 0.0)


def test_slit_endpoints_relation():
    d_lambda = np.array([-3.0, -1e-9, 0.0, 1e-9, 3.0])
    d_t = np.full(5, 0.01)
    x, y = slit_endpoints(d_lambda, d_t)
    assert np.all(x < 0.0) and np.all(y > 0.0)
    np.testing.assert_allclose(-(x + y), d_lambda, atol=1e-14)
    np.testing.assert_allclose(-x * y / 4.0, d_t, rtol=1e-13)


def test_graded_grid_accumulates_at_end():
    grid = trace_grid(1.0, 10, graded=True)
    assert grid[0] == 0.0 and grid[-1] == 1.0
    assert np.all(np.diff(np.diff(grid)) < 0.0)


def test_welding_endpoints_of_constant_driver():
    ends = welding_endpoints(zero_driver(1.0), 1.0)
    assert ends.centered_left == pytest.approx(-2.0, abs=1e-7)
    assert ends.centered_right == pytest.approx(2.0, abs=1e-7)
    assert ends.ratio == pytest.approx(1.0, abs=1e-7)
    assert ends.alpha == pytest.approx(0.5, abs=1e-7)


def test_holder_bound_for_linear_driver():
    assert holder_check(linear_driver(1.0), 1.0, energy=0.5) <= 1.0
    assert holder_check(zero_driver(), 1.0, energy=0.0) == 0.0
