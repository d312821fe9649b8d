import math

import numpy as np
import pytest
from pydantic import ValidationError

from src.driver_library.schema import DriverSpec
from src.driver_library.service import (
    arc_sle33_base_images, arc_time_for_angle, arc_time_for_ratio, build_driver, circular_arc,
    circular_arc_weld, corner_driver, emw_lambda, emw_params, emw_tau, emw_xi, gamma0_lambda, gamma0_xi,
    sample_driver, slit_alpha, slit_c, slit_map, sqrt_slit, trace_target, universal_tip_angle,
    universal_truncation, universal_truncation_time, wang_lambda_down, wang_params, wang_tau,
    wang_tip_image, wang_weld_endpoints, wang_xi,
)
from src.utils import PreconditionError


@pytest.mark.parametrize("theta", [math.pi / 6.0, math.pi / 4.0, math.pi / 3.0, 2.0, 2.8])
def test_wang_driver_endpoints(theta):
    params = wang_params(theta)
    assert params.tau == pytest.approx(math.cos(theta) ** 2 / 12.0 + math.sin(theta) ** 2 / 4.0)
    assert params.tau == pytest.approx((1.0 - math.cos(2.0 * theta) / 2.0) / 6.0)
    down = wang_lambda_down(theta)
    assert down.scalar(0.0) == pytest.approx(0.0, abs=1e-12)
    assert down.scalar(params.tau) == pytest.approx(4.0 * math.cos(theta) / 3.0)
    assert wang_xi(theta).scalar(params.tau) == pytest.approx(params.terminal_xi)
    assert wang_tip_image(theta, 0.0) == complex(math.cos(theta), math.sin(theta))
    assert abs(wang_tip_image(theta, params.tau)) < 1e-6


def test_wang_up_and_down_are_reverses(theta):
    tau = wang_tau(theta)
    times = np.linspace(0.0, tau, 51)
    up = wang_xi(theta).eval(times)
    down = wang_lambda_down(theta).eval(tau - times)
    np.testing.assert_allclose(up, down - down[0], atol=1e-12)


def test_wang_symmetric_angle_gives_zero_driver():
    params = wang_params(math.pi / 2.0)
    assert params.tau == pytest.approx(0.25)
    assert params.weld_x == pytest.approx(-1.0)
    assert params.weld_y == pytest.approx(1.0)
    times = np.linspace(0.0, 0.25, 11)
    assert np.all(wang_xi(math.pi / 2.0).eval(times) == 0.0)


@pytest.mark.parametrize("theta", [0.0, math.pi, -1.0])
def test_wang_rejects_angles_outside_half_plane(theta):
    with pytest.raises(PreconditionError):
        wang_params(theta)


def test_wang_weld_endpoints_reflect(theta):
    x, y = wang_weld_endpoints(theta)
    x_ref, y_ref = wang_weld_endpoints(math.pi - theta)
    assert x == pytest.approx(-y_ref)
    assert y == pytest.approx(-x_ref)


def test_emw_driver_known_values():
    params = emw_params(-1.0, 2.0)
    assert params.tau == pytest.approx(13.0 / 24.0)
    assert params.terminal_lambda == pytest.approx(-2.0 / 3.0)
    assert params.r == pytest.approx(0.5)
    driver = emw_lambda(-1.0, 2.0)
    assert driver.scalar(0.0) == 0.0
    assert driver.scalar(params.tau) == pytest.approx(-2.0 / 3.0, abs=1e-9)
    assert emw_xi(-1.0, 2.0).scalar(params.tau) == pytest.approx(2.0 / 3.0, abs=1e-9)


def test_emw_symmetric_pair_is_zero_driver():
    assert emw_tau(-1.0, 1.0) == pytest.approx(0.25)
    times = np.linspace(0.0, 0.25, 11)
    assert np.all(emw_xi(-1.0, 1.0).eval(times) == 0.0)


def test_emw_reflection_flips_sign():
    times = np.linspace(0.0, emw_tau(-1.0, 2.0), 21)
    np.testing.assert_allclose(emw_lambda(-1.0, 2.0).eval(times), -emw_lambda(-2.0, 1.0).eval(times),
                               atol=1e-14)


@pytest.mark.parametrize("x0, y0", [(1.0, 2.0), (-1.0, -0.5), (0.0, 1.0)])
def test_emw_requires_straddling_pair(x0, y0):
    with pytest.raises(PreconditionError):
        emw_lambda(x0, y0)


def test_gamma0_driver():
    xi = gamma0_xi()
    assert xi.horizon == pytest.approx(1.0 / 12.0)
    assert xi.scalar(1.0 / 12.0) == pytest.approx(-(8.0 / math.sqrt(3.0)) * math.sqrt(1.0 / 12.0))
    down = gamma0_lambda()
    assert down.scalar(0.0) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("alpha", [0.1, 1.0 / 3.0, 0.5, 0.9])
def test_slit_parameters_round_trip(alpha):
    c = slit_c(alpha)
    assert slit_alpha(c) == pytest.approx(alpha)
    slit = sqrt_slit(alpha=alpha)
    assert slit.angle == pytest.approx(math.pi * alpha)
    assert slit.weld_x * slit.weld_y == pytest.approx(-4.0)
    assert -slit.weld_x / slit.weld_y == pytest.approx((1.0 - alpha) / alpha)


def test_slit_map_opens_slit_at_angle():
    slit = sqrt_slit(alpha=0.5)
    func = slit_map(slit.alpha, slit.weld_x, slit.weld_y)
    assert np.angle(func(0.0)) == pytest.approx(slit.angle)
    assert abs(func(slit.weld_x - 1e-12)) < 1e-5
    assert abs(func(slit.weld_y + 1e-12)) < 1e-5


def test_sqrt_slit_requires_parameter():
    with pytest.raises(PreconditionError):
        sqrt_slit()
    with pytest.raises(PreconditionError):
        slit_c(1.0)


def test_corner_driver_pieces():
    driver = corner_driver(2.0, eps=0.04)
    assert driver.horizon == pytest.approx(1.04)
    assert driver.scalar(0.5) == 0.0
    assert driver.scalar(1.04) == pytest.approx(0.4)


def test_universal_truncation_limits():
    assert universal_truncation_time(1.0) == 0.0
    assert universal_truncation_time(1e-12) == pytest.approx(math.pi / 6.0, rel=1e-9)
    assert universal_tip_angle(1.0) == pytest.approx(math.pi / 2.0)
    assert universal_tip_angle(0.5) + universal_tip_angle(2.0) == pytest.approx(math.pi)
    with pytest.raises(PreconditionError):
        universal_truncation_time(2.0)


def test_universal_truncation_ratio():
    info = universal_truncation(0.25)
    assert -info.x / info.y == pytest.approx(0.25)
    assert info.x < 0.0 < info.y


@pytest.mark.parametrize("theta", [math.pi / 4.0, math.pi / 3.0, 1.2])
def test_circular_arc_consistency(theta):
    driver, info = circular_arc(theta=theta)
    assert info.time == pytest.approx((1.0 - math.sin(theta) ** 4) / 8.0)
    assert info.theta == pytest.approx(theta)
    assert abs(info.tip - 0.5) == pytest.approx(0.5)
    assert circular_arc_weld(info.time, info.weld_x) == pytest.approx(info.weld_y)
    root = math.sqrt(1.0 - 8.0 * info.time)
    assert 4.0 * info.alpha * (1.0 - info.alpha) == pytest.approx(root)
    assert driver.scalar(info.time) == pytest.approx(1.5 * (1.0 - root))


def test_circular_arc_from_ratio():
    _, info = circular_arc(alpha=0.3)
    assert info.time == pytest.approx(arc_time_for_ratio(0.3))
    assert info.alpha == pytest.approx(0.3)
    assert arc_time_for_angle(math.pi / 2.0) == 0.0


def test_arc_sle33_base_images_start_at_origin():
    left, right = arc_sle33_base_images(0.0)
    assert left == 0.0 and right == 0.0
    left, right = arc_sle33_base_images(0.5)
    assert left < 3.0 * math.sqrt(2.0) * (1.0 - math.sqrt(0.5)) < right


def test_build_driver_from_description():
    driver = build_driver(DriverSpec(family="emw", x0=-1.0, y0=2.0))
    assert driver.horizon == pytest.approx(13.0 / 24.0)
    driver, time = trace_target(DriverSpec(family="universal", ratio=0.5))
    assert time == pytest.approx(universal_truncation_time(0.5))
    driver, time = trace_target(DriverSpec(family="universal", ratio=2.0))
    assert driver.label == "universal_reflected"
    assert time == pytest.approx(universal_truncation_time(0.5))


@pytest.mark.parametrize("payload", [
    {"family": "wang"},
    {"family": "emw", "x0": -1.0},
    {"family": "wang", "theta": 4.0},
    {"family": "unknown"},
    {"family": "zero", "colour": "red"},
])
def test_driver_spec_validation(payload):
    with pytest.raises(ValidationError):
        DriverSpec(**payload)


def test_sample_driver():
    samples = sample_driver(wang_xi(math.pi / 3.0), n=10)
    assert len(samples.t) == 11
    assert samples.t[-1] == pytest.approx(wang_tau(math.pi / 3.0))
    assert samples.value[0] == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(PreconditionError):
        sample_driver(wang_xi(math.pi / 3.0), n=0)
