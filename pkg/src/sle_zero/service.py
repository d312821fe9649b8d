"""
Детерминированный SLE₀(ρ₁,…,ρₙ) вверх и вниз.

Драйвер и силовые точки интегрируются одной системой в часах s с
dt/ds = 1/Σ|V_j - ξ|^{-2}; столкновение с любой из точек становится
экспоненциальным затуханием и ловится событием.
"""
import math
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp

from src.driver_library.service import (
    arc_sle33_base_images, arc_scaled_driver, emw_tau, emw_xi, sqrt_slit, wang_constants, wang_lambda_down,
)
from src.logger import app_logger as logger
from src.loewner_flow.service import sample_on_clock
from src.settings import settings
from src.sle_zero.schema import SleReport, SleZeroConfig, SleZeroTrajectory
from src.utils import IntegrationError, PreconditionError


def integrate(config: SleZeroConfig, horizon: float, n: int = 1000) -> SleZeroTrajectory:
    """
    Интегрирует SLE₀ до horizon или до первого столкновения.

    Вниз: λ̇ = -Σρ_j Re(1/(U_j - λ)), U̇_j = 2/(U_j - λ).
    Вверх: ξ̇ = Σρ_j Re(1/(V_j - ξ)), V̇_j = -2/(V_j - ξ).

    Returns:
        SleZeroTrajectory на равномерной сетке из n отрезков до момента остановки
    """
    if horizon <= 0.0:
        raise PreconditionError(f"Горизонт должен быть положительным, получено {horizon}")
    rho = np.asarray(config.rho, dtype=float)
    points = np.asarray(config.start_force_points, dtype=complex)
    m = points.size
    tol = settings.collision_tol
    if np.min(np.abs(points - config.start_driver)) <= tol:
        raise PreconditionError("Силовая точка совпадает с начальным значением драйвера")
    sign = 1.0 if config.direction == "up" else -1.0

    def rhs(s, y):
        w = (y[1:1 + m] - y[0]) + 1j * y[1 + m:1 + 2 * m]
        abs2 = w.real * w.real + w.imag * w.imag
        clock = 1.0 / np.sum(1.0 / abs2)
        inv = np.conj(w) / abs2
        d_driver = sign * np.sum(rho * inv.real)
        d_points = -sign * 2.0 * inv
        return np.concatenate(([d_driver], d_points.real, d_points.imag, [1.0])) * clock

    def reach(s, y):
        return y[-1] - horizon
    reach.terminal = True
    reach.direction = 1

    def collide(s, y):
        w = (y[1:1 + m] - y[0]) + 1j * y[1 + m:1 + 2 * m]
        return float(np.min(np.abs(w))) - tol
    collide.terminal = True
    collide.direction = -1

    start = np.concatenate(([config.start_driver], points.real, points.imag, [0.0]))
    sol = solve_ivp(rhs, (0.0, settings.flow_s_max), start, method="DOP853", events=(reach, collide),
                    dense_output=True, rtol=settings.ode_rtol, atol=settings.ode_atol)
    if sol.status == -1:
        raise IntegrationError(f"Интегратор SLE₀ остановился: {sol.message}")
    if sol.t_events[1].size:
        stop_reason, stop_time = "collision", float(sol.y_events[1][0][-1])
        logger.debug(f"SLE₀ {config.rho}: столкновение в момент {stop_time:.15g}")
    elif sol.t_events[0].size:
        stop_reason, stop_time = "horizon", horizon
    else:
        raise IntegrationError(f"Часы SLE₀ исчерпаны на t={sol.y[-1, -1]:.6g}")

    times = np.linspace(0.0, stop_time, n + 1)
    values = sample_on_clock(sol, times, clock_row=2 * m + 1)
    return SleZeroTrajectory(
        config=config, times=times, driver=values[:, 0],
        force_points=values[:, 1:1 + m] + 1j * values[:, 1 + m:1 + 2 * m],
        stop_reason=stop_reason, stop_time=stop_time,
    )


def reverse_trajectory(traj: SleZeroTrajectory) -> SleZeroTrajectory:
    """ξ_t = λ_{T-t} - λ_T, V_t = U_{T-t} - λ_T; направление меняется на противоположное."""
    end = float(traj.driver[-1])
    points = traj.force_points[::-1] - end
    config = SleZeroConfig(
        direction="down" if traj.config.direction == "up" else "up",
        rho=traj.config.rho, start_driver=0.0,
        start_force_points=[complex(p.real, max(p.imag, 0.0)) for p in points[0]],
    )
    return SleZeroTrajectory(
        config=config, times=traj.times.copy(), driver=traj.driver[::-1] - end,
        force_points=points, stop_reason="horizon", stop_time=traj.stop_time,
    )


def verify_wang_sle8(theta: float, n: int = 1000, fraction: float = 0.9) -> SleReport:
    """SLE₀(-8) вниз от e^{iθ} против нисходящего драйвера минимизатора на [0, 0.9τ]."""
    s, c, _, tau = wang_constants(theta)
    traj = integrate(SleZeroConfig(direction="down", rho=[-8.0], start_force_points=[complex(c, s)]),
                     fraction * tau, n)
    expected = wang_lambda_down(theta).eval(traj.times)
    z = traj.centered()[:, 0]
    conservation = np.max(np.abs(z.real * s ** 3 - c * z.imag ** 3))
    return SleReport(check="wang_sle8", params={"theta": theta},
                     residual=float(np.max(np.abs(traj.driver - expected))), tolerance=1e-6,
                     extra={"conservation": float(conservation)})


def verify_emw_sle44(x0: float, y0: float, n: int = 1000, fraction: float = 0.9) -> SleReport:
    """
    SLE₀(-4,-4) вверх от (0, x0, y0) против обращенного драйвера кривой с заданной
    склейкой; скорость убывания (y-x)² - 2xy и время столкновения.
    """
    tau = emw_tau(x0, y0)
    config = SleZeroConfig(direction="up", rho=[-4.0, -4.0], start_force_points=[complex(x0), complex(y0)])
    traj = integrate(config, fraction * tau, n)
    expected = emw_xi(x0, y0).eval(traj.times)
    centered = traj.centered().real
    x, y = centered[:, 0], centered[:, 1]
    q = (y - x) ** 2 - 2.0 * x * y
    rate = np.gradient(q, traj.times)
    full = integrate(config, 2.0 * tau, n)
    return SleReport(
        check="emw_sle44", params={"x0": x0, "y0": y0},
        residual=float(np.max(np.abs(traj.driver - expected))), tolerance=1e-6,
        extra={
            "rate_error": float(np.max(np.abs(rate + 24.0))),
            "collision_time": full.stop_time,
            "collision_error": abs(full.stop_time - tau),
        },
    )


def verify_slit_sle22(alpha: float, n: int = 1000) -> SleReport:
    """
    SLE₀(-2,-2) вверх от концов склейки щели α; обращенный драйвер должен быть c√t
    с c = c(α). Коэффициент подбирается наименьшими квадратами.
    """
    slit = sqrt_slit(alpha=alpha)
    config = SleZeroConfig(direction="up", rho=[-2.0, -2.0],
                           start_force_points=[complex(slit.weld_x), complex(slit.weld_y)])
    traj = integrate(config, 2.0, n)
    down = reverse_trajectory(traj)
    root = np.sqrt(down.times)
    fitted = float(np.dot(down.driver, root) / np.dot(root, root))
    scale = max(abs(slit.c), 1.0)
    return SleReport(
        check="slit_sle22", params={"alpha": alpha},
        residual=abs(fitted - slit.c) / scale, tolerance=1e-5,
        extra={"fitted_c": fitted, "c": slit.c, "stop_time": traj.stop_time,
               "sup_error": float(np.max(np.abs(down.driver - slit.c * root))) / scale},
    )


def arc_identity_residual(times: Optional[np.ndarray] = None) -> float:
    """max |λ̇ - 3/(g(0-) - λ) - 3/(g(0+) - λ)| по замкнутым формулам растянутой дуги."""
    times = np.linspace(0.01, 0.9, 90) if times is None else times
    k = 3.0 * math.sqrt(2.0)
    worst = 0.0
    for t in times:
        left, right = arc_sle33_base_images(float(t))
        lam = k * (1.0 - math.sqrt(1.0 - t))
        rate = k / (2.0 * math.sqrt(1.0 - t))
        worst = max(worst, abs(rate - 3.0 / (left - lam) - 3.0 / (right - lam)))
    return worst


def verify_arc_sle33(n: int = 1000, t0: float = 0.01, t1: float = 0.9) -> SleReport:
    """
    Дуга, ортогональная ℝ: тождество для скорости драйвера и SLE₀(-3,-3) вниз
    из образов основания в момент t0. Невязка: худшее из двух отклонений.
    """
    left, right = arc_sle33_base_images(t0)
    driver = arc_scaled_driver()
    config = SleZeroConfig(direction="down", rho=[-3.0, -3.0], start_driver=driver.scalar(t0),
                           start_force_points=[complex(left), complex(right)])
    traj = integrate(config, t1 - t0, n)
    expected = driver.eval(t0 + traj.times)
    identity = arc_identity_residual()
    integration_error = float(np.max(np.abs(traj.driver - expected)))
    return SleReport(
        check="arc_sle33", params={"t0": t0, "t1": t1},
        residual=max(identity, integration_error), tolerance=1e-6,
        extra={"identity": identity, "integration_error": integration_error},
    )
