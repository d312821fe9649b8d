"""
Сервис потока Лёвнера: движение точек вниз и вверх, времена столкновения,
преобразования драйверов, кончик кривой и образы основания.

Точечные потоки интегрируются в регуляризованных часах s, ds = dt/|g-λ|²,
в которых столкновение с драйвером становится экспоненциальным затуханием.
"""
import math
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from src.logger import app_logger as logger
from src.loewner_flow.schema import BaseImages, Driver, FlowPoint
from src.loewner_flow.trace import slit_endpoints
from src.settings import settings
from src.utils import IntegrationError, PreconditionError

DOWN = 1.0
UP = -1.0


def _ivp_options() -> dict:
    return {"method": "DOP853", "rtol": settings.ode_rtol, "atol": settings.ode_atol}


def _check_time(driver: Driver, t1: float) -> None:
    if t1 < 0.0:
        raise PreconditionError(f"Время должно быть неотрицательным, получено {t1}")
    if t1 > driver.horizon * (1.0 + 1e-12) + 1e-15:
        raise PreconditionError(f"Время {t1} больше горизонта драйвера {driver.horizon}")


def _solve_point_flow(driver: Driver, z0: complex, t1: float, sign: float,
                      steps: Optional[int] = None, dense: bool = False):
    """
    Интегрирует (Re g, Im g, t) в часах s до t1 или до столкновения.

    Returns:
        (FlowPoint, решение solve_ivp)
    """
    z0 = complex(z0)
    lam0 = driver.scalar(0.0)
    w0 = z0 - lam0
    if abs(w0) == 0.0:
        raise PreconditionError(f"Начальная точка {z0} совпадает со значением драйвера λ(0)")
    if z0.imag < 0.0:
        raise PreconditionError(f"Начальная точка {z0} вне замкнутой верхней полуплоскости")
    tol = settings.collision_tol

    def rhs(s, y):
        w = complex(y[0], y[1]) - driver.scalar(y[2])
        dg = sign * 2.0 * w.conjugate()
        return [dg.real, dg.imag, w.real * w.real + w.imag * w.imag]

    def reach(s, y):
        return y[2] - t1
    reach.terminal = True
    reach.direction = 1

    def collide(s, y):
        return abs(complex(y[0], y[1]) - driver.scalar(y[2])) - tol
    collide.terminal = True
    collide.direction = -1

    n_steps = steps or settings.flow_min_steps
    s_estimate = min(t1 / abs(w0) ** 2, settings.flow_s_max)
    sol = solve_ivp(
        rhs, (0.0, settings.flow_s_max), [z0.real, z0.imag, 0.0],
        events=(reach, collide), dense_output=dense,
        max_step=max(s_estimate / n_steps, 1e-9), **_ivp_options()
    )
    if sol.status == -1:
        raise IntegrationError(f"Интегратор остановился: {sol.message}")

    if sol.t_events[1].size:
        y_event = sol.y_events[1][0]
        swallow = float(y_event[2])
        logger.debug(f"Точка {z0} поглощена в момент {swallow:.15g}")
        point = FlowPoint(position=complex(y_event[0], y_event[1]), time=swallow,
                          alive=False, swallow_time=swallow)
    elif sol.t_events[0].size:
        y_event = sol.y_events[0][0]
        point = FlowPoint(position=complex(y_event[0], y_event[1]), time=t1, alive=True)
    else:
        raise IntegrationError(
            f"Часы потока исчерпаны (s_max={settings.flow_s_max}) на t={sol.y[2, -1]:.6g} из {t1}"
        )
    return point, sol


def _flow_point(driver: Driver, z0: complex, t1: float, sign: float, steps: Optional[int]) -> FlowPoint:
    if t1 == 0.0:
        if complex(z0) == driver.scalar(0.0):
            raise PreconditionError(f"Начальная точка {z0} совпадает со значением драйвера λ(0)")
        return FlowPoint(position=complex(z0), time=0.0, alive=True)
    point, _ = _solve_point_flow(driver, z0, t1, sign, steps)
    return point


def evolve_point_down(driver: Driver, z0: complex, t1: float, steps: Optional[int] = None) -> FlowPoint:
    """
    Нисходящее уравнение Лёвнера dg/dt = 2/(g - λ(t)).

    Args:
        driver: драйвер λ
        z0: точка замкнутой верхней полуплоскости
        t1: конечный момент, не больше горизонта
        steps: нижняя граница числа шагов интегратора

    Returns:
        FlowPoint; при столкновении alive=False и swallow_time
    """
    _check_time(driver, t1)
    return _flow_point(driver, z0, t1, DOWN, steps)


def evolve_point_up(driver: Driver, z0: complex, t1: float, steps: Optional[int] = None) -> FlowPoint:
    """Восходящее уравнение dh/dt = -2/(h - ξ(t)); вещественные точки остаются вещественными."""
    _check_time(driver, t1)
    return _flow_point(driver, z0, t1, UP, steps)


def hitting_time(driver: Driver, x0: float) -> Optional[float]:
    """
    Первый момент, когда восходящая траектория x0 встречает ξ.

    Интегрирование идет чуть дальше горизонта (драйвер там постоянен),
    чтобы столкновение ровно в момент горизонта не терялось.

    Returns:
        время столкновения или None, если его нет до горизонта
    """
    x0 = float(x0)
    horizon = driver.horizon
    slack = 1e-9 * max(1.0, horizon)
    point, _ = _solve_point_flow(driver, x0, horizon + 1e3 * slack, UP)
    if point.swallow_time is None or point.swallow_time > horizon + slack:
        return None
    return point.swallow_time


def sample_on_clock(sol, times: Sequence[float], clock_row: int) -> np.ndarray:
    """
    Значения плотного решения в заданные моменты t, где t = sol.y[clock_row]
    монотонно растет по s. Возвращает массив формы (len(times), dim).
    """
    s_nodes = sol.t
    t_nodes = sol.y[clock_row]
    rows = []
    for t in times:
        k = int(np.searchsorted(t_nodes, t))
        if k == 0:
            s = s_nodes[0]
        elif k >= len(t_nodes):
            s = s_nodes[-1]
        else:
            lo, hi = s_nodes[k - 1], s_nodes[k]
            f_lo = sol.sol(lo)[clock_row] - t
            f_hi = sol.sol(hi)[clock_row] - t
            if f_lo >= 0.0:
                s = lo
            elif f_hi <= 0.0:
                s = hi
            else:
                s = brentq(lambda v: sol.sol(v)[clock_row] - t, lo, hi, xtol=1e-15)
        rows.append(sol.sol(s))
    return np.array(rows)


def flow_path(driver: Driver, z0: complex, times: Sequence[float], direction: str = "down") -> np.ndarray:
    """
    Траектория точки на сетке времени (одним интегрированием).

    Returns:
        комплексный массив g_{t_k}(z0); моменты после столкновения не допускаются
    """
    times = np.asarray(times, dtype=float)
    if times.size == 0:
        raise PreconditionError("Пустая сетка времени")
    t_end = float(times.max())
    _check_time(driver, t_end)
    sign = DOWN if direction == "down" else UP
    point, sol = _solve_point_flow(driver, z0, t_end, sign, dense=True)
    if not point.alive and point.swallow_time < t_end:
        raise PreconditionError(
            f"Точка {z0} поглощена в момент {point.swallow_time:.6g} до конца сетки {t_end:.6g}"
        )
    values = sample_on_clock(sol, times, clock_row=2)
    return values[:, 0] + 1j * values[:, 1]


def scale_driver(driver: Driver, r: float) -> Driver:
    """Драйвер кривой rγ: t -> r·λ(t/r²) на [0, r²T]."""
    if not r > 0.0:
        raise PreconditionError(f"Коэффициент масштаба должен быть положительным, получено {r}")
    r2 = r * r
    deriv_func = (lambda t: driver.deriv(np.asarray(t) / r2) / r) if driver.has_derivative else None
    return Driver(
        func=lambda t: r * driver.eval(np.asarray(t) / r2),
        deriv_func=deriv_func,
        horizon=r2 * driver.horizon,
        label=f"scale({driver.label}, {r:.12g})",
    )


def reverse_driver(driver: Driver, T: float, shift: bool = True) -> Driver:
    """
    Обращенный драйвер ξ(t) = λ(T - t) - λ(T).

    Args:
        shift: при False возвращается λ(T - t) без нормировки ξ(0) = 0
    """
    _check_time(driver, T)
    offset = driver.scalar(T) if shift else 0.0
    deriv_func = (lambda t: -driver.deriv(T - np.asarray(t))) if driver.has_derivative else None
    return Driver(
        func=lambda t: driver.eval(T - np.asarray(t)) - offset,
        deriv_func=deriv_func,
        horizon=T,
        label=f"reverse({driver.label}, {T:.12g})",
    )


def tip_point(driver: Driver, T: float) -> complex:
    """
    Кончик γ(T) кривой, порожденной нисходящим драйвером на [0, T].

    Значение λ(T) поднимается восходящим потоком с драйвером λ(T - t)
    в часах u = √t: dh/du = -4u/(h - λ(T - u²)). Старт смещен от особой
    точки на 2i·u0; поток сжимающий, начальная погрешность затухает.
    """
    _check_time(driver, T)
    if T == 0.0:
        return complex(driver.scalar(0.0), 0.0)
    u_end = math.sqrt(T)
    u0 = 1e-8 * u_end

    def rhs(u, y):
        d = -4.0 * u / (complex(y[0], y[1]) - driver.scalar(T - u * u))
        return [d.real, d.imag]

    start = driver.scalar(T - u0 * u0) + 2j * u0
    sol = solve_ivp(rhs, (u0, u_end), [start.real, start.imag], **_ivp_options())
    if not sol.success:
        raise IntegrationError(f"Не удалось поднять кончик кривой: {sol.message}")
    return complex(sol.y[0, -1], max(sol.y[1, -1], 0.0))


def base_images(driver: Driver, T: float, t_start: float = 0.0) -> BaseImages:
    """
    Образы простых концов λ(t_start)± под нисходящим потоком до момента T.

    Часы u = √(t - t_start), dg/du = 4u/(g - λ). Старт в u0 на концах
    щели c√s, где c = (λ(t_start + u0²) - λ(t_start))/u0; при t_start > 0
    u0² берется не меньше 1e-10·t_start, иначе сдвиг теряется при сложении.
    Это концы склейки куска кривой, выросшего на [t_start, T].
    """
    _check_time(driver, T)
    span = T - t_start
    if span < 0.0:
        raise PreconditionError(f"Начало {t_start} позже конца {T}")
    if span == 0.0:
        value = driver.scalar(T)
        return BaseImages(time=T, left=value, right=value, driver_value=value)
    u_end = math.sqrt(span)
    s0 = min(max(1e-16 * span, 1e-10 * abs(t_start)), 1e-4 * span)
    s0 = (t_start + s0) - t_start
    if s0 <= 0.0:
        raise PreconditionError(f"Отрезок [{t_start}, {T}] неразличим в двойной точности")
    u0 = math.sqrt(s0)
    lam0 = driver.scalar(t_start)
    shift = driver.scalar(t_start + s0) - lam0
    x0, y0 = slit_endpoints(-shift, s0)

    def rhs(u, y):
        lam = driver.scalar(t_start + u * u)
        return [4.0 * u / (y[0] - lam), 4.0 * u / (y[1] - lam)]

    sol = solve_ivp(rhs, (u0, u_end), [lam0 + float(x0), lam0 + float(y0)], **_ivp_options())
    if not sol.success:
        raise IntegrationError(f"Не удалось провести образы основания: {sol.message}")
    left, right = float(sol.y[0, -1]), float(sol.y[1, -1])
    if not (math.isfinite(left) and math.isfinite(right)):
        raise IntegrationError(f"Образы основания не конечны: {left}, {right}")
    return BaseImages(time=T, left=left, right=right, driver_value=driver.scalar(T))


def welding_endpoints(driver: Driver, T: float) -> BaseImages:
    """
    Отрезок, склеиваемый восходящим драйвером ξ на [0, T]: образы основания
    для нисходящего драйвера λ(t) = ξ(T - t).
    """
    return base_images(reverse_driver(driver, T, shift=False), T)


def holder_check(driver: Driver, T: float, energy: float, n: int = 200) -> float:
    """
    Максимум |Δλ| / √(2·I·Δt) по всем парам узлов равномерной сетки.
    Для драйвера конечной энергии I значение не превосходит 1.
    """
    times = np.linspace(0.0, T, n + 1)
    values = driver.samples(times)
    dl = np.abs(values[:, None] - values[None, :])
    dt = np.abs(times[:, None] - times[None, :])
    mask = dt > 0.0
    if energy <= 0.0:
        return 0.0 if np.all(dl[mask] == 0.0) else math.inf
    return float(np.max(dl[mask] / np.sqrt(2.0 * energy * dt[mask])))


def angle_path(driver: Driver, T: float, times: Sequence[float]) -> np.ndarray:
    """arg(g_t(γ(T)) - λ(t)) на сетке t < T."""
    tip = tip_point(driver, T)
    path = flow_path(driver, tip, times, direction="down")
    centered = path - driver.eval(np.asarray(times, dtype=float))
    return np.angle(centered)

