"""
Структура семейств: системы ОДУ, алгебраические многообразия, рациональное
отображение для γ₀, универсальность и подход угла к π/2.
"""
import math
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.spatial.distance import directed_hausdorff

from src.driver_library.service import (
    emw_tau, emw_xi, gamma0_lambda, reflected_universal_lambda, universal_gamma_lambda,
    universal_tip_angle, universal_truncation, universal_truncation_time,
    wang_constants, wang_lambda_down, wang_tip_image, wang_xi,
)
from src.families.schema import (
    AngleTrajectory, CurveCheck, FamilyOdeReport, MapOrders, UniversalityReport, VarietyResidual,
)
from src.logger import app_logger as logger
from src.loewner_flow.schema import CurveTrace, Driver
from src.loewner_flow.service import angle_path, base_images, reverse_driver, tip_point
from src.loewner_flow.trace import trace_curve
from src.settings import settings
from src.utils import IntegrationError, PreconditionError


def _solve(rhs, start, t_end: float, n: int):
    times = np.linspace(0.0, t_end, n + 1)
    sol = solve_ivp(rhs, (0.0, t_end), start, method="DOP853", t_eval=times,
                    rtol=settings.ode_rtol, atol=settings.ode_atol)
    if not sol.success:
        raise IntegrationError(f"Система не проинтегрирована: {sol.message}")
    return times, sol.y


def wang_ode_solve(theta: float, n: int = 1000, fraction: float = 0.9) -> FamilyOdeReport:
    """
    λ̇ = 8x/(x²+y²), ẋ = -6x/(x²+y²), ẏ = -2y/(x²+y²) из (0, cos θ, sin θ).
    Сохраняется x·sin³θ = cos θ·y³.
    """
    s, c, _, tau = wang_constants(theta)

    def rhs(t, v):
        _, x, y = v
        r2 = x * x + y * y
        return [8.0 * x / r2, -6.0 * x / r2, -2.0 * y / r2]

    times, (lam, x, y) = _solve(rhs, [0.0, c, s], fraction * tau, n)
    closed = np.array([wang_tip_image(theta, float(t)) for t in times])
    return FamilyOdeReport(
        family="wang", params={"theta": theta}, times=times.tolist(), driver=lam.tolist(),
        driver_error=float(np.max(np.abs(lam - wang_lambda_down(theta).eval(times)))),
        path_error=float(np.max(np.abs(x + 1j * y - closed))),
        conservation=float(np.max(np.abs(x * s ** 3 - c * y ** 3))),
    )


def emw_ode_solve(x0: float, y0: float, n: int = 1000, fraction: float = 0.9) -> FamilyOdeReport:
    """
    ξ̇ = -4/x - 4/y, ẋ = 2/x + 4/y, ẏ = 4/x + 2/y для центрированных концов.

    conservation: max |d/dt((y-x)² - 2xy) + 24|; identity_error: вспомогательное
    уравнение для ξ и Ȧ = -(3/4)ξ̇ при A = (x+y)/2.
    """
    tau = emw_tau(x0, y0)

    def rhs(t, v):
        _, x, y = v
        return [-4.0 / x - 4.0 / y, 2.0 / x + 4.0 / y, 4.0 / x + 2.0 / y]

    times, (xi, x, y) = _solve(rhs, [0.0, x0, y0], fraction * tau, n)
    xi_rate = -4.0 / x - 4.0 / y
    q = (y - x) ** 2 - 2.0 * x * y
    xi_end = (2.0 / 3.0) * (x0 + y0)
    shifted = xi - xi_end
    with np.errstate(divide="ignore", invalid="ignore"):
        auxiliary = 16.0 * shifted / (shifted ** 2 - (32.0 / 3.0) * (tau - times))
    a_rate = np.gradient((x + y) / 2.0, times)
    identity = max(float(np.max(np.abs(auxiliary - xi_rate))),
                   float(np.max(np.abs(a_rate + 0.75 * xi_rate)[1:-1])))
    return FamilyOdeReport(
        family="emw", params={"x0": x0, "y0": y0}, times=times.tolist(), driver=xi.tolist(),
        driver_error=float(np.max(np.abs(xi - emw_xi(x0, y0).eval(times)))),
        path_error=0.0,
        conservation=float(np.max(np.abs(np.gradient(q, times) + 24.0))),
        identity_error=identity,
    )


# Многообразия

def variety_residual_gamma0(point: complex) -> VarietyResidual:
    """(4 - 3x)y² - 3x(x - 1)²."""
    x, y = complex(point).real, complex(point).imag
    return VarietyResidual(point=point, residual=(4.0 - 3.0 * x) * y * y - 3.0 * x * (x - 1.0) ** 2)


def variety_residual_universal(point: complex) -> VarietyResidual:
    """(x² + y²)² + 4xy."""
    x, y = complex(point).real, complex(point).imag
    return VarietyResidual(point=point, residual=(x * x + y * y) ** 2 + 4.0 * x * y)


def rational_map_R(z):
    """R(z) = z²(z - 3)/(1 - 3z)."""
    z = np.asarray(z, dtype=complex)
    return z * z * (z - 3.0) / (1.0 - 3.0 * z)


def _order(func, eps: Sequence[float] = (1e-2, 1e-3)) -> float:
    a, b = (abs(complex(func(e))) for e in eps)
    return math.log(a / b) / math.log(eps[0] / eps[1])


def rational_map_orders() -> MapOrders:
    """Локальные порядки R в неподвижных точках 0, 1, ∞ по отношениям значений."""
    return MapOrders(
        zero=_order(lambda e: rational_map_R(e)),
        one=_order(lambda e: rational_map_R(1.0 + e) - 1.0),
        infinity=_order(lambda e: 1.0 / rational_map_R(1.0 / e)),
    )


def _secant_angle(trace: CurveTrace, share: float = 0.01) -> float:
    k = int(np.searchsorted(trace.times, (1.0 - share) * trace.times[-1]))
    k = min(k, trace.points.size - 2)
    phi = math.atan2(trace.points[k].imag - trace.tip.imag, trace.points[k].real - trace.tip.real)
    return min(abs(phi), math.pi - abs(phi))


def gamma0_check(n: Optional[int] = None) -> CurveCheck:
    """Трасса γ₀: многообразие, Im R, конец в 1 и угол π/3 к ℝ."""
    driver = gamma0_lambda()
    trace = trace_curve(driver, driver.horizon, n)
    points = trace.points
    variety = max(abs(variety_residual_gamma0(p).residual) for p in points)
    return CurveCheck(
        name="gamma0", variety=variety,
        secondary=float(np.max(np.abs(rational_map_R(points).imag))),
        endpoint=trace.tip, terminal_angle=_secant_angle(trace),
    )


def universal_check(n: Optional[int] = None, share: float = 0.99) -> CurveCheck:
    """
    Трасса Γ: многообразие (x²+y²)² + 4xy и окружность для Γ².

    В момент π/6 петля замыкается в основании, последние щели вырождаются,
    поэтому трасса доводится до share·π/6, а ее конец сверяется с tip_point.
    """
    if not 0.0 < share < 1.0:
        raise PreconditionError(f"Доля горизонта должна лежать в (0, 1), получено {share}")
    driver = universal_gamma_lambda()
    T = share * driver.horizon
    trace = trace_curve(driver, T, n)
    points = trace.points
    variety = max(abs(variety_residual_universal(p).residual) for p in points)
    circle = float(np.max(np.abs(np.abs(points ** 2 + 1j) - 1.0)))
    tip_gap = abs(trace.tip - tip_point(driver, T))
    logger.debug(f"Γ до {share}·π/6: многообразие {variety:.3e}, окружность {circle:.3e}, кончик {tip_gap:.3e}")
    return CurveCheck(name="universal", variety=variety, secondary=circle, endpoint=trace.tip,
                      time=T, tip_gap=tip_gap)


# Универсальность

def wang_universality_params(theta: float, alpha: float):
    """(t_α, r): время усечения ξ_θ и масштаб, переводящий его в γ_α."""
    s_t, c_t, _, _ = wang_constants(theta)
    s_a, c_a, _, _ = wang_constants(alpha)
    if not (c_t > 0.0 and c_a > 0.0):
        raise PreconditionError("θ и α должны лежать в (0, π/2)")
    t_alpha = (s_t ** 3 * c_a) / (6.0 * c_t * s_a ** 3) * (1.0 - math.cos(2.0 * alpha) / 2.0)
    r = math.sqrt((s_t ** 3 / c_t) * (c_a / s_a ** 3))
    return t_alpha, r


def hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    pa = np.column_stack([a.real, a.imag])
    pb = np.column_stack([b.real, b.imag])
    return max(directed_hausdorff(pa, pb)[0], directed_hausdorff(pb, pa)[0])


def wang_universality_check(theta: float, alpha: float, n: Optional[int] = None) -> UniversalityReport:
    """
    Кривая ξ_θ на [0, t_α], сдвинутая на -ξ_θ(t_α) и уменьшенная в r раз,
    против трассы γ_α. Возвращает расстояние Хаусдорфа.
    """
    t_alpha, r = wang_universality_params(theta, alpha)
    universal = reverse_driver(wang_xi(theta, horizon=t_alpha), t_alpha)
    curve = trace_curve(universal, t_alpha, n).points / r
    target_driver = wang_lambda_down(alpha)
    target = trace_curve(target_driver, target_driver.horizon, n).points
    distance = hausdorff(curve, target)
    logger.debug(f"Универсальность θ={theta:.6g}, α={alpha:.6g}: расстояние {distance:.3e}")
    return UniversalityReport(params={"theta": theta, "alpha": alpha}, residual=distance,
                              extra={"t_alpha": t_alpha, "r": r})


def emw_universality_check(r: float) -> UniversalityReport:
    """Склейка Γ[0, t(r)] должна иметь отношение концов r (отражение Γ при r > 1)."""
    if not r > 0.0:
        raise PreconditionError(f"Отношение должно быть положительным, получено {r}")
    base = r if r <= 1.0 else 1.0 / r
    driver = universal_gamma_lambda() if r <= 1.0 else reflected_universal_lambda()
    closed = universal_truncation(base)
    ends = base_images(driver, universal_truncation_time(base))
    endpoint_error = abs(ends.centered_left - closed.x) + abs(ends.centered_right - closed.y) \
        if r <= 1.0 else abs(ends.centered_left + closed.y) + abs(ends.centered_right + closed.x)
    return UniversalityReport(
        params={"r": r}, residual=abs(ends.ratio - r),
        extra={"time": closed.time, "ratio": ends.ratio, "endpoint_error": endpoint_error},
    )


def emw_tip_angle_check(r: float, n: Optional[int] = None) -> UniversalityReport:
    """Аргумент кончика Γ[0, t(r)] против β(r)."""
    base = r if r <= 1.0 else 1.0 / r
    driver = universal_gamma_lambda() if r <= 1.0 else reflected_universal_lambda()
    time = universal_truncation_time(base)
    tip = trace_curve(driver, time, n).tip
    precise = tip_point(driver, time)
    expected = universal_tip_angle(r)
    return UniversalityReport(
        params={"r": r}, residual=abs(math.atan2(tip.imag, tip.real) - expected),
        extra={"expected": expected, "tip_point_error": abs(math.atan2(precise.imag, precise.real) - expected)},
    )


def even_angle_check(driver: Driver, T: Optional[float] = None, grid: int = 200) -> AngleTrajectory:
    """
    arg(g_t(γ(T)) - λ(t)) на сетке, сгущенной к T и обрезанной в T(1 - 1e-4).
    Для драйвера конечной энергии последний угол близок к π/2.
    """
    T = driver.horizon if T is None else T
    k = np.arange(grid + 1, dtype=float) / grid
    times = T * (1.0 - 1e-4) * (1.0 - (1.0 - k) ** 2)
    angles = angle_path(driver, T, times)
    gap = np.abs(angles - math.pi / 2.0)
    return AngleTrajectory(times=times.tolist(), angles=angles.tolist(), final=float(angles[-1]),
                           monotone=bool(np.all(np.diff(gap) <= 1e-9)))
