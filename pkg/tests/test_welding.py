import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from src.driver_library.service import corner_driver, linear_driver, wang_weld_endpoints, wang_xi, zero_driver
from src.loewner_flow.schema import BaseImages
from src.loewner_flow.service import base_images
from src.utils import IntegrationError, PreconditionError
from src.welding import service as welding_service
from src.welding.service import (
    corner_ratio, emw_w, emw_weld_residual, emw_weld_solve, emw_weld_table, infinitesimal_welding_check,
    loglog_order, ratio_trajectory, wang_universality_welding, wang_weld, wang_weld_rescaled,
    wang_weld_scale, weld_from_driver,
)


@pytest.mark.parametrize("theta", [math.pi / 6.0, math.pi / 3.0, 2.0])
def test_wang_weld_maps_endpoints(theta):
    x, y = wang_weld_endpoints(theta)
    assert wang_weld(theta, x) == pytest.approx(y)
    assert wang_weld(theta, 0.0) == 0.0
    with pytest.raises(PreconditionError):
        wang_weld(theta, 1.1 * x)


def test_wang_weld_rescaling_is_universal():
    xs = np.linspace(-0.9, -0.1, 9)
    for theta in (math.pi / 6.0, math.pi / 4.0, math.pi / 3.0):
        scale = wang_weld_scale(theta)
        x_end, _ = wang_weld_endpoints(theta)
        inside = xs[xs / scale >= x_end]
        rescaled = np.array([scale * wang_weld(theta, x / scale) for x in inside])
        np.testing.assert_allclose(rescaled, wang_weld_rescaled(inside), rtol=1e-12)
    with pytest.raises(PreconditionError):
        wang_weld_scale(2.0)


def test_numeric_weld_of_zero_driver():
    weld = weld_from_driver(zero_driver(1.0), n_pairs=4)
    assert weld.x_end == pytest.approx(-2.0, abs=1e-7)
    assert weld.y_end == pytest.approx(2.0, abs=1e-7)
    for pair in weld.pairs:
        assert pair.ok
        assert pair.y == pytest.approx(-pair.x, abs=1e-7)
        assert pair.tau == pytest.approx(pair.x ** 2 / 4.0, abs=1e-7)


def test_numeric_weld_matches_wang_weld(theta):
    weld = weld_from_driver(wang_xi(theta), n_pairs=5)
    x_end, y_end = wang_weld_endpoints(theta)
    assert weld.x_end == pytest.approx(x_end, abs=1e-6)
    assert weld.y_end == pytest.approx(y_end, abs=1e-6)
    for pair in weld.pairs[:-1]:
        assert pair.ok, pair.message
        assert pair.y == pytest.approx(wang_weld(theta, pair.x), abs=1e-5)


def test_emw_weld_solution():
    assert emw_weld_solve(-1.0, 2.0, -1.0) == 2.0
    assert emw_weld_solve(-1.0, 2.0, 0.0) == 0.0
    assert emw_weld_solve(-1.5, 1.5, -0.5) == 0.5
    with pytest.raises(PreconditionError):
        emw_weld_solve(-1.0, 2.0, 0.5)
    with pytest.raises(PreconditionError):
        emw_weld_solve(1.0, 2.0, 0.5)


def test_emw_weld_table_is_increasing_and_exact():
    table = emw_weld_table(-1.0, 2.0, n=10)
    ys = [p.y for p in table]
    assert np.all(np.diff(ys) > 0.0)
    assert all(0.0 < y < 2.0 for y in ys)
    assert max(p.residual for p in table) < 1e-8


def test_emw_weld_reflection():
    x = -0.3
    y = emw_weld_solve(-1.0, 2.0, x)
    assert emw_weld_solve(-2.0, 1.0, -y) == pytest.approx(-x, abs=1e-10)
    assert emw_weld_residual(-2.0, 1.0, -y) < 1e-8


@given(st.floats(min_value=0.05, max_value=0.95), st.floats(min_value=-30.0, max_value=-0.05))
def test_emw_w_has_single_maximum(r, u):
    s = -1.0 / r
    assert emw_w(r, u) <= emw_w(r, s) + 1e-12


def test_ratio_trajectory_of_zero_driver():
    traj = ratio_trajectory(zero_driver(1.0), -1.0, 1.0, n=20)
    assert traj.collision_time == pytest.approx(0.25, abs=1e-8)
    np.testing.assert_allclose(traj.ratios, 1.0, atol=1e-9)
    assert traj.times[0] == 0.0


def test_loglog_order_of_power_law():
    deltas = [1e-2, 1e-3, 1e-4]
    assert loglog_order(deltas, [d ** 1.5 for d in deltas]) == pytest.approx(1.5)


def test_infinitesimal_welding_expansion():
    fit = infinitesimal_welding_check(linear_driver(1.0), [1e-3, 1e-4, 1e-5])
    assert fit.slope == pytest.approx(1.0)
    assert fit.order >= 1.4
    assert max(fit.residuals) < 1e-4
    with pytest.raises(PreconditionError):
        infinitesimal_welding_check(linear_driver(1.0), [])


@pytest.mark.parametrize("c", [-2.0, -1.0, 0.5, 1.0, 1.5, 2.0, 3.0])
def test_corner_ratio_matches_slit(c):
    for eps in (1e-2, 1e-3):
        result = corner_ratio(c, eps)
        assert 0.0 < result.alpha < 1.0
        assert result.alpha == pytest.approx(result.expected, abs=1e-6)


def test_base_images_after_offset_start():
    ends = base_images(corner_driver(3.0, 1e-3), 1.0 + 1e-3, t_start=1.0)
    assert ends.centered_left == pytest.approx(-2.0 * math.sqrt(1e-3) * math.sqrt(0.8 / 0.2), rel=1e-6)
    assert ends.centered_right == pytest.approx(2.0 * math.sqrt(1e-3) * math.sqrt(0.2 / 0.8), rel=1e-6)


def test_corner_ratio_rejects_degenerate_welding(monkeypatch):
    monkeypatch.setattr(welding_service, "base_images",
                        lambda driver, T, t_start=0.0: BaseImages(time=T, left=1.0, right=2.0, driver_value=0.0))
    with pytest.raises(IntegrationError):
        corner_ratio(2.0, 1e-3)


def test_wang_universality_welding():
    result = wang_universality_welding(math.pi / 3.0, math.pi / 4.0)
    assert result.residual < 1e-12
    assert result.u_alpha < 0.0 < result.phi_u
    with pytest.raises(PreconditionError):
        wang_universality_welding(math.pi / 3.0, 2.0)
