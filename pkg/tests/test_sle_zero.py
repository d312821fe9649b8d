import math

import numpy as np
import pytest
from pydantic import ValidationError

from src.sle_zero import service as sle_service
from src.sle_zero.schema import SleZeroConfig
from src.sle_zero.service import (
    arc_identity_residual, integrate, reverse_trajectory, verify_arc_sle33, verify_emw_sle44,
    verify_slit_sle22, verify_wang_sle8,
)
from src.utils import PreconditionError


def test_unforced_point_collides_at_quarter():
    config = SleZeroConfig(direction="up", rho=[0.0], start_force_points=[1.0])
    traj = integrate(config, horizon=1.0, n=50)
    assert traj.stop_reason == "collision"
    assert traj.stop_time == pytest.approx(0.25, abs=1e-8)
    np.testing.assert_allclose(traj.driver, 0.0, atol=1e-15)
    before = traj.times < traj.stop_time - 1e-3
    assert before.sum() >= 40
    np.testing.assert_allclose(traj.force_points[before, 0].real, np.sqrt(1.0 - 4.0 * traj.times[before]),
                               atol=1e-6)


def test_integration_stops_at_horizon():
    config = SleZeroConfig(direction="down", rho=[-2.0], start_force_points=[2j])
    traj = integrate(config, horizon=0.5, n=10)
    assert traj.stop_reason == "horizon"
    assert traj.stop_time == 0.5
    assert traj.times.shape == (11,)
    assert traj.force_points.shape == (11, 1)
    assert np.all(traj.force_points.imag > 0.0)


def test_config_validation():
    with pytest.raises(ValidationError):
        SleZeroConfig(direction="up", rho=[-4.0, -4.0], start_force_points=[-1.0])
    with pytest.raises(ValidationError):
        SleZeroConfig(direction="down", rho=[-8.0], start_force_points=[1.0 - 1j])
    with pytest.raises(ValidationError):
        SleZeroConfig(direction="sideways", rho=[-8.0], start_force_points=[1j])


def test_force_point_on_driver_is_rejected():
    config = SleZeroConfig(direction="up", rho=[-2.0], start_driver=1.0, start_force_points=[1.0])
    with pytest.raises(PreconditionError):
        integrate(config, horizon=1.0)
    with pytest.raises(PreconditionError):
        integrate(SleZeroConfig(direction="up", rho=[-2.0], start_force_points=[1.0]), horizon=0.0)


def test_reverse_trajectory():
    config = SleZeroConfig(direction="up", rho=[-4.0, -4.0], start_force_points=[-1.0, 2.0])
    traj = integrate(config, horizon=0.3, n=20)
    rev = reverse_trajectory(traj)
    assert rev.config.direction == "down"
    assert rev.driver[0] == 0.0
    assert rev.driver[-1] == pytest.approx(-traj.driver[-1])
    np.testing.assert_allclose(rev.centered()[-1], traj.centered()[0], atol=1e-12)


def test_wang_sle8(theta):
    report = verify_wang_sle8(theta, n=200)
    assert report.passed, report.residual
    assert report.extra["conservation"] < 1e-8


def test_emw_sle44():
    report = verify_emw_sle44(-1.0, 2.0, n=200)
    assert report.passed, report.residual
    assert report.extra["collision_time"] == pytest.approx(13.0 / 24.0, abs=1e-6)


@pytest.mark.parametrize("alpha", [1.0 / 3.0, 0.5, 0.7])
def test_slit_sle22(alpha):
    report = verify_slit_sle22(alpha, n=400)
    assert report.passed, report.extra
    assert report.extra["stop_time"] == pytest.approx(1.0, abs=1e-6)


def test_arc_sle33():
    assert arc_identity_residual() < 1e-10
    report = verify_arc_sle33(n=200)
    assert report.passed
    assert report.params == {"t0": 0.01, "t1": 0.9}
    assert report.residual == max(report.extra["identity"], report.extra["integration_error"])
    assert math.isfinite(report.extra["integration_error"])


def test_arc_sle33_fails_on_drifting_driver(monkeypatch):
    exact = sle_service.integrate

    def drifting(config, horizon, n=1000):
        traj = exact(config, horizon, n)
        return traj.model_copy(update={"driver": traj.driver + 1e-4 * traj.times})

    monkeypatch.setattr(sle_service, "integrate", drifting)
    report = verify_arc_sle33(n=200)
    assert not report.passed
    assert report.extra["integration_error"] > 1e-5
