"""
Сравнение двух семейств минимизаторов: локальные отношения энергий 9/8,
точное 9/8 для дуги и асимптотики (π/4)², (4/π)² при θ -> π/2.
"""
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from src.compare.schema import ArcRatioReport, ArcRatioRow, AsymptoticTables, RatioSweep, SameWeldReport
from src.driver_library.service import (
    circular_arc, emw_lambda, emw_tau, emw_xi, universal_tip_angle, wang_lambda_down, wang_tau,
    wang_weld_endpoints, wang_xi,
)
from src.energy.service import arc_energy, emw_energy, energy_quadrature, wang_energy
from src.families.service import hausdorff
from src.logger import app_logger as logger
from src.loewner_flow.schema import Driver
from src.loewner_flow.service import base_images, tip_point, welding_endpoints
from src.loewner_flow.trace import trace_curve
from src.utils import BracketError, PreconditionError, run_parallel
from src.welding.schema import ExpansionFit
from src.welding.service import loglog_order

LOCAL_RATIO = 9.0 / 8.0
WELD_CONSTANT = (math.pi / 4.0) ** 2
TIP_CONSTANT = (4.0 / math.pi) ** 2
DEFAULT_DELTAS = (1e-3, 1e-4, 1e-5, 1e-6)


def _check_deltas(driver: Driver, deltas: Sequence[float]) -> List[float]:
    deltas = [float(d) for d in deltas]
    if not deltas:
        raise PreconditionError("Пустая сетка δ")
    if any(not 0.0 < d <= driver.horizon for d in deltas):
        raise PreconditionError(f"Значения δ должны лежать в (0, {driver.horizon}]")
    slope = float(driver.deriv(0.0))
    if not math.isfinite(slope) or slope == 0.0:
        raise PreconditionError(f"Нужна конечная ненулевая производная в нуле, получено {slope}")
    return deltas


def tip_expansion(driver: Driver, delta: float) -> complex:
    """λ(0) + 2i√δ + (2/3)λ̇δ - (i/18)λ̇²δ^{3/2}."""
    slope = float(driver.deriv(0.0))
    root = math.sqrt(delta)
    return complex(driver.scalar(0.0) + (2.0 / 3.0) * slope * delta,
                   2.0 * root - slope ** 2 * delta * root / 18.0)


def richardson(values: Sequence[float], q: float) -> Tuple[float, float]:
    """
    Экстраполяция по последним значениям на сетке δ_k = δ_0/q^k.

    Порядок оценивается по трем последним значениям; если оценка неположительна
    или неконечна, берется порядок 1.

    Returns:
        (предел, наблюдаемый порядок)
    """
    values = [float(v) for v in values]
    if len(values) < 2:
        raise PreconditionError("Для экстраполяции нужно хотя бы два значения")
    order = 1.0
    if len(values) >= 3:
        d1 = values[-2] - values[-3]
        d2 = values[-1] - values[-2]
        if d1 != 0.0 and d2 != 0.0:
            observed = math.log(abs(d1 / d2)) / math.log(q)
            if math.isfinite(observed) and observed > 0.0:
                order = observed
    limit = values[-1] + (values[-1] - values[-2]) / (q ** order - 1.0)
    return limit, order


def _grid_ratio(deltas: Sequence[float]) -> float:
    if len(deltas) < 2:
        return 10.0
    return deltas[0] / deltas[1]


def _tip_angle(tip: complex, origin: float) -> float:
    return math.atan2(tip.imag, tip.real - origin)


def local_ratio_curve(driver: Driver, deltas: Sequence[float] = DEFAULT_DELTAS, method: str = "tip",
                      n: Optional[int] = None) -> RatioSweep:
    """
    Энергия λ на [0, δ] к энергии минимизатора через кончик γ(δ).

    Args:
        method: "tip" поднимает кончик восходящим потоком, "trace" берет конец трассы
            и отбрасывает δ, где удвоение сетки меняет знаменатель больше чем на 1%

    Returns:
        RatioSweep с пределом по Ричардсону и отклонениями кончика от разложения
    """
    deltas = _check_deltas(driver, deltas)
    if method not in ("tip", "trace"):
        raise PreconditionError(f"Неизвестный способ {method}")
    origin = driver.scalar(0.0)

    def point(delta: float) -> Optional[Tuple[float, float, float, float]]:
        numerator = energy_quadrature(driver, delta).value
        if method == "tip":
            tip = tip_point(driver, delta)
        else:
            steps = n or 2000
            tip = trace_curve(driver, delta, steps, samples=1, graded=False).tip
            fine = trace_curve(driver, delta, 2 * steps, samples=1, graded=False).tip
            coarse_den = wang_energy(_tip_angle(tip, origin))
            fine_den = wang_energy(_tip_angle(fine, origin))
            if abs(coarse_den - fine_den) > 0.01 * fine_den:
                logger.info(f"δ={delta:g} отброшено: ошибка трассы доминирует")
                return None
            tip = fine
        denominator = wang_energy(_tip_angle(tip, origin))
        return delta, numerator, denominator, abs(tip - tip_expansion(driver, delta))

    rows = [r for r in run_parallel(point, deltas) if r is not None]
    if not rows:
        raise PreconditionError("Все значения δ отброшены")
    params, nums, dens, cross = (list(c) for c in zip(*rows))
    ratios = [a / b for a, b in zip(nums, dens)]
    limit, order = richardson(ratios, _grid_ratio(params)) if len(ratios) > 1 else (ratios[-1], None)
    return RatioSweep(label=f"curve:{driver.label}", params=params, numerators=nums, denominators=dens,
                      ratios=ratios, limit=limit, order=order, expected=LOCAL_RATIO, cross_check=cross)


def local_ratio_weld(driver: Driver, deltas: Sequence[float] = DEFAULT_DELTAS) -> RatioSweep:
    """Энергия ξ на [0, δ] к энергии минимизатора, склеивающего те же концы."""
    deltas = _check_deltas(driver, deltas)

    def point(delta: float) -> Tuple[float, float, float]:
        ends = welding_endpoints(driver, delta)
        return delta, energy_quadrature(driver, delta).value, emw_energy(ends.ratio)

    rows = run_parallel(point, deltas)
    params, nums, dens = (list(c) for c in zip(*rows))
    ratios = [a / b for a, b in zip(nums, dens)]
    limit, order = richardson(ratios, _grid_ratio(params)) if len(ratios) > 1 else (ratios[-1], None)
    return RatioSweep(label=f"weld:{driver.label}", params=params, numerators=nums, denominators=dens,
                      ratios=ratios, limit=limit, order=order, expected=LOCAL_RATIO)


def infinitesimal_curve_check(driver: Driver, deltas: Sequence[float]) -> ExpansionFit:
    """|γ(δ) - разложение| по сетке δ и порядок убывания в log-log."""
    deltas = _check_deltas(driver, deltas)
    residuals = run_parallel(lambda d: abs(tip_point(driver, d) - tip_expansion(driver, d)), deltas)
    order = loglog_order(deltas, residuals) if len(deltas) > 1 else math.inf
    return ExpansionFit(deltas=deltas, residuals=residuals, order=order, slope=float(driver.deriv(0.0)))


def arc_exact_ratios(thetas: Sequence[float] = (math.pi / 4.0, math.pi / 3.0)) -> ArcRatioReport:
    """
    Дуга окружности, ортогональной ℝ: квадратура против -9 log sin θ, отношение
    к -8 log sin θ и к энергии минимизатора с численно найденными концами склейки.
    """
    if not thetas:
        raise PreconditionError("Пустая сетка θ")

    def row(theta: float) -> ArcRatioRow:
        driver, info = circular_arc(theta=theta)
        quadrature = energy_quadrature(driver, info.time).value
        closed = arc_energy(theta)
        ends = base_images(driver, info.time)
        return ArcRatioRow(
            theta=theta, time=info.time, quadrature=quadrature, closed_form=closed,
            wang=wang_energy(theta), ratio=closed / wang_energy(theta),
            weld_ratio=quadrature / emw_energy(ends.ratio), quadrature_error=abs(quadrature - closed),
        )

    return ArcRatioReport(rows=run_parallel(row, thetas))


def beta_inverse(theta: float, grid: int = 200) -> float:
    """
    r с β(r) = θ. При θ > π/2 корень ищется на (0, 1), где β убывает от π до π/2;
    при θ < π/2 используется β(1/r) = π - β(r).
    """
    if not 0.0 < theta < math.pi:
        raise PreconditionError(f"θ должен лежать в (0, π), получено {theta}")
    if theta == math.pi / 2.0:
        return 1.0
    if theta < math.pi / 2.0:
        return 1.0 / beta_inverse(math.pi - theta, grid)

    sample = np.geomspace(1e-12, 1.0, grid)
    values = np.array([universal_tip_angle(float(r)) for r in sample])
    if np.any(np.diff(values) >= 0.0):
        k = int(np.argmax(np.diff(values) >= 0.0))
        raise BracketError(f"β не убывает на сетке: β({sample[k]:.6g})={values[k]:.12g}, "
                           f"β({sample[k + 1]:.6g})={values[k + 1]:.12g}")
    lo = 1e-300
    if universal_tip_angle(lo) <= theta:
        raise BracketError(f"θ={theta} выше β на отрезке поиска")
    return brentq(lambda r: universal_tip_angle(r) - theta, lo, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps)


def asymptotic_ratio_tables(eps: Sequence[float] = (0.01,)) -> AsymptoticTables:
    """
    Таблицы при θ = π/2 ± ε.

    Сторона склейки: I_EMW(-x_θ/y_θ)/I_Wang(θ) -> (π/4)².
    Сторона кончика: I_EMW(β⁻¹(θ))/I_Wang(θ) -> (4/π)².
    """
    if not eps:
        raise PreconditionError("Пустая сетка ε")
    thetas = sorted({math.pi / 2.0 + sign * e for e in eps for sign in (-1.0, 1.0)})
    weld_num, tip_num, dens = [], [], []
    for theta in thetas:
        x, y = wang_weld_endpoints(theta)
        weld_num.append(emw_energy(-x / y))
        tip_num.append(emw_energy(beta_inverse(theta)))
        dens.append(wang_energy(theta))
    weld_ratios = [a / b for a, b in zip(weld_num, dens)]
    tip_ratios = [a / b for a, b in zip(tip_num, dens)]
    return AsymptoticTables(
        welding=RatioSweep(label="welding", params=thetas, numerators=weld_num, denominators=dens,
                           ratios=weld_ratios, expected=WELD_CONSTANT),
        tip=RatioSweep(label="tip", params=thetas, numerators=tip_num, denominators=dens,
                       ratios=tip_ratios, expected=TIP_CONSTANT),
        product=[a * b for a, b in zip(weld_ratios, tip_ratios)],
    )


def same_weld_distinct_curves(theta: float, n: Optional[int] = None, grid: int = 2001) -> SameWeldReport:
    """
    Минимизатор с точкой e^{iθ} и минимизатор, склеивающий те же (x_θ, y_θ):
    разрыв драйверов на общем отрезке, трассы и аргументы кончиков.
    """
    x, y = wang_weld_endpoints(theta)
    common = min(wang_tau(theta), emw_tau(x, y))
    times = np.linspace(0.0, common, grid)
    gap = float(np.max(np.abs(wang_xi(theta).eval(times) - emw_xi(x, y).eval(times))))

    wang_driver = wang_lambda_down(theta)
    emw_driver = emw_lambda(x, y)
    wang_trace = trace_curve(wang_driver, wang_driver.horizon, n)
    emw_trace = trace_curve(emw_driver, emw_driver.horizon, n)
    emw_tip = emw_trace.tip
    logger.debug(f"Та же склейка θ={theta:.6g}: разрыв драйверов {gap:.3e}")
    return SameWeldReport(
        theta=theta, weld_x=x, weld_y=y, driver_gap=gap,
        curve_distance=hausdorff(wang_trace.points, emw_trace.points),
        wang_tip_angle=_tip_angle(wang_trace.tip, 0.0), emw_tip_angle=_tip_angle(emw_tip, 0.0),
        wang_curve=[[float(t), p.real, p.imag] for t, p in zip(wang_trace.times, wang_trace.points)],
        emw_curve=[[float(t), p.real, p.imag] for t, p in zip(emw_trace.times, emw_trace.points)],
    )
