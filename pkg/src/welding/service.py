"""
Конформные склейки: численная склейка по равным временам столкновения,
замкнутая склейка минимизаторов с заданной точкой, неявное уравнение
для кривых с заданной склейкой.
"""
import math
from typing import List, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from src.driver_library.service import (
    corner_driver, slit_alpha, wang_constants, wang_weld_endpoints,
)
from src.logger import app_logger as logger
from src.loewner_flow.schema import Driver
from src.loewner_flow.service import base_images, flow_path, hitting_time, welding_endpoints
from src.utils import BracketError, IntegrationError, PreconditionError, run_parallel
from src.welding.schema import (
    CornerRatio, EmwWeldPoint, ExpansionFit, RatioTrajectory, UniversalityWelding, WeldingMap, WeldPair,
)


def weld_from_driver(driver: Driver, T: Optional[float] = None, n_pairs: int = 20) -> WeldingMap:
    """
    Склейка восходящего драйвера на [0, T].

    Точки x_k делят отрезок [x_T, ξ(0)] на равные части; для каждой ищется
    y > ξ(0) с тем же временем столкновения. Неудачи записываются в пару.
    """
    T = driver.horizon if T is None else T
    ends = welding_endpoints(driver, T)
    origin = driver.scalar(0.0)
    span_left = ends.left - origin
    span_right = ends.right - origin

    def right_hit(y: float) -> float:
        tau = hitting_time(driver, y)
        return T if tau is None else tau

    def solve(k: int) -> WeldPair:
        x = origin + span_left * k / n_pairs
        if k == n_pairs:
            return WeldPair(x=ends.left, y=ends.right, tau=T)
        tau = hitting_time(driver, x)
        if tau is None:
            return WeldPair(x=x, ok=False, message="точка не сталкивается с драйвером до горизонта")
        lo = origin + 1e-6 * span_right
        try:
            if right_hit(lo) > tau:
                raise BracketError(f"нижняя граница уже позже τ={tau:.6g}")
            y = brentq(lambda v: right_hit(v) - tau, lo, ends.right, xtol=1e-13, rtol=1e-13)
        except (BracketError, ValueError) as e:
            logger.warning(f"Пара для x={x:.6g} не найдена: {e}")
            return WeldPair(x=x, tau=tau, ok=False, message=str(e))
        return WeldPair(x=x, y=y, tau=tau)

    pairs = run_parallel(solve, range(1, n_pairs + 1))
    return WeldingMap(pairs=pairs, x_end=ends.left, y_end=ends.right, horizon=T)


def wang_weld(theta: float, x: float) -> float:
    """φ_θ(x) = -x/√(1 + π(cos θ/sin³θ)x²) на [x_θ, 0]."""
    _, _, b, _ = wang_constants(theta)
    x_end, _ = wang_weld_endpoints(theta)
    if not x_end * (1.0 + 1e-12) <= x <= 0.0:
        raise PreconditionError(f"x={x} вне [{x_end}, 0]")
    return -x / math.sqrt(1.0 + math.pi * b * x * x)


def wang_weld_scale(theta: float) -> float:
    """c_θ = √(π cos θ/sin³θ), при котором c_θφ_θ(x/c_θ) не зависит от θ."""
    _, _, b, _ = wang_constants(theta)
    if b <= 0.0:
        raise PreconditionError(f"Масштаб определен для θ < π/2, получено {theta}")
    return math.sqrt(math.pi * b)


def wang_weld_rescaled(x):
    """-x/√(1 + x²)."""
    x = np.asarray(x, dtype=float)
    return -x / np.sqrt(1.0 + x * x)


def wang_universality_welding(theta: float, alpha: float) -> UniversalityWelding:
    """
    Склейка ξ_θ на [0, t_α] сводит u_α к φ_θ(u_α); отношение концов должно
    совпасть с отношением концов минимизатора для α.
    """
    s_t, c_t, _, _ = wang_constants(theta)
    s_a, c_a, _, _ = wang_constants(alpha)
    if not (c_t > 0.0 and c_a > 0.0):
        raise PreconditionError("θ и α должны лежать в (0, π/2)")
    u = -math.sqrt((s_t ** 3 / c_t) * c_a / (s_a - alpha * c_a))
    phi = -u / math.sqrt(1.0 + math.pi * (c_t / s_t ** 3) * u * u)
    x_a, y_a = wang_weld_endpoints(alpha)
    ratio_theta = -u / phi
    ratio_alpha = -x_a / y_a
    return UniversalityWelding(
        theta=theta, alpha=alpha, u_alpha=u, phi_u=phi, scale=abs(u / x_a),
        ratio_theta=ratio_theta, ratio_alpha=ratio_alpha, residual=abs(ratio_theta - ratio_alpha),
    )


# Неявное уравнение склейки

def emw_w(r: float, u: float) -> float:
    """W(r, u) = ru + 1/u + (1 - r)log|u|."""
    return r * u + 1.0 / u + (1.0 - r) * math.log(abs(u))


def _mobius(x0: float, y0: float, x: float) -> float:
    return (x - y0) / (x - x0)


def _mobius_inverse(x0: float, y0: float, v: float) -> float:
    return (y0 - v * x0) / (1.0 - v)


def _partner(r: float, u: float) -> float:
    """Точка по другую сторону от максимума s = -1/r на (-∞, 0) с тем же W."""
    s = -1.0 / r
    if u == s:
        return s
    target = emw_w(r, u)

    def g(v: float) -> float:
        return emw_w(r, v) - target

    if u < s:
        hi = s / 2.0
        for _ in range(200):
            if g(hi) < 0.0:
                break
            hi /= 2.0
        else:
            raise BracketError(f"Не удалось зажать партнера для u={u} справа от {s}")
        return brentq(g, s, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    lo = 2.0 * s
    for _ in range(200):
        if g(lo) < 0.0:
            break
        lo *= 2.0
    else:
        raise BracketError(f"Не удалось зажать партнера для u={u} слева от {s}")
    return brentq(g, lo, s, xtol=1e-15, rtol=4 * np.finfo(float).eps)


def _weld_ratio_below_one(x0: float, y0: float, point: float) -> float:
    if point == x0:
        return y0
    if point == y0:
        return x0
    if point == 0.0:
        return 0.0
    r = -x0 / y0
    v = _partner(r, _mobius(x0, y0, point))
    return _mobius_inverse(x0, y0, v)


def emw_weld_solve(x0: float, y0: float, x: float) -> float:
    """
    φ(x) для кривой, склеивающей x0 с y0.

    При r = -x0/y0 < 1 решается W(r, T(φ(x))) = W(r, T(x)) с T(u) = (u - y0)/(u - x0);
    при r > 1 склейка получается отражением задачи для (-y0, -x0).
    """
    if not (x0 < 0.0 < y0):
        raise PreconditionError(f"Нужно x0 < 0 < y0, получено ({x0}, {y0})")
    if not x0 <= x <= 0.0:
        raise PreconditionError(f"x={x} вне [{x0}, 0]")
    r = -x0 / y0
    if r == 1.0:
        return -x
    if r < 1.0:
        return _weld_ratio_below_one(x0, y0, x)
    return -_weld_ratio_below_one(-y0, -x0, -x)


def emw_weld_residual(x0: float, y0: float, x: float) -> float:
    """|W(r, T(φ(x))) - W(r, T(x))| в той постановке, где r < 1."""
    y = emw_weld_solve(x0, y0, x)
    r = -x0 / y0
    if r == 1.0 or x in (x0, 0.0):
        return 0.0
    if r > 1.0:
        x0, y0, x, y = -y0, -x0, -x, -y
        r = 1.0 / r
    return abs(emw_w(r, _mobius(x0, y0, y)) - emw_w(r, _mobius(x0, y0, x)))


def emw_weld_table(x0: float, y0: float, n: int = 20) -> List[EmwWeldPoint]:
    """Решения во внутренних точках x0·k/(n + 1)."""
    points = []
    for k in range(1, n + 1):
        x = x0 * k / (n + 1)
        points.append(EmwWeldPoint(x=x, y=emw_weld_solve(x0, y0, x), residual=emw_weld_residual(x0, y0, x)))
    return points


# Траектории и асимптотики

def ratio_trajectory(driver: Driver, x0: float, y0: float, n: int = 200) -> RatioTrajectory:
    """
    r(t) = -(x(t) - ξ(t))/(y(t) - ξ(t)) при восходящем потоке до первого столкновения.
    Сетка сгущена к моменту столкновения.
    """
    hits = [hitting_time(driver, x0), hitting_time(driver, y0)]
    hits = [h for h in hits if h is not None]
    collision = min(hits) if hits else driver.horizon
    k = np.arange(n, dtype=float) / n
    times = collision * (1.0 - (1.0 - k) ** 2)
    left = flow_path(driver, x0, times, direction="up").real
    right = flow_path(driver, y0, times, direction="up").real
    xi = driver.eval(times)
    ratios = -(left - xi) / (right - xi)
    return RatioTrajectory(times=times.tolist(), ratios=ratios.tolist(), collision_time=collision)


def loglog_order(deltas: Sequence[float], residuals: Sequence[float]) -> float:
    res = np.maximum(np.asarray(residuals, dtype=float), np.finfo(float).tiny)
    return float(np.polyfit(np.log(deltas), np.log(res), 1)[0])


def infinitesimal_welding_check(driver: Driver, deltas: Sequence[float]) -> ExpansionFit:
    """
    Концы склейки к моменту δ против x(δ) = -2√δ + (2/3)ξ̇δ - (1/18)ξ̇²δ^{3/2}
    и зеркального y(δ).
    """
    deltas = [float(d) for d in deltas]
    if not deltas:
        raise PreconditionError("Пустая сетка δ")
    slope = float(driver.deriv(0.0))

    def residual(delta: float) -> float:
        ends = welding_endpoints(driver, delta)
        root = math.sqrt(delta)
        x_exp = -2.0 * root + (2.0 / 3.0) * slope * delta - slope ** 2 * delta * root / 18.0
        y_exp = 2.0 * root + (2.0 / 3.0) * slope * delta + slope ** 2 * delta * root / 18.0
        return max(abs(ends.centered_left - x_exp), abs(ends.centered_right - y_exp))

    residuals = run_parallel(residual, deltas)
    order = loglog_order(deltas, residuals) if len(deltas) > 1 else math.inf
    return ExpansionFit(deltas=deltas, residuals=residuals, order=order, slope=slope)


def corner_ratio(c: float, eps: float) -> CornerRatio:
    """y/(y - x) для склейки куска после угла; не зависит от eps."""
    ends = base_images(corner_driver(c, eps), 1.0 + eps, t_start=1.0)
    alpha = ends.alpha
    if not 0.0 < alpha < 1.0:
        raise IntegrationError(f"Склейка куска после угла дала α={alpha} вне (0, 1) для c={c}")
    return CornerRatio(c=c, eps=eps, alpha=alpha, expected=slit_alpha(c))
