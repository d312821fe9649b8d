"""
Набор проверок: каждая группа возвращает строки отчета с измеренной
величиной и порогом.
"""
import math
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from src.cli.schema import VerificationResult as Result
from src.compare.service import (
    TIP_CONSTANT, WELD_CONSTANT, LOCAL_RATIO, arc_exact_ratios, asymptotic_ratio_tables,
    infinitesimal_curve_check, local_ratio_curve, local_ratio_weld, same_weld_distinct_curves,
)
from src.driver_library.service import (
    emw_lambda, emw_tau, emw_xi, linear_driver, wang_lambda_down, wang_xi,
)
from src.energy.service import emw_energy, energy_quadrature, wang_energy
from src.families.service import (
    emw_universality_check, gamma0_check, universal_check, wang_universality_check,
)
from src.logger import app_logger as logger
from src.loewner_flow.service import hitting_time
from src.loewner_flow.trace import trace_curve
from src.sle_zero.service import verify_arc_sle33, verify_emw_sle44, verify_slit_sle22, verify_wang_sle8
from src.utils import LoewnerLabError
from src.welding.service import emw_weld_table, infinitesimal_welding_check, wang_weld, weld_from_driver

ANGLES = (math.pi / 6.0, math.pi / 4.0, math.pi / 3.0)
RATIOS = (0.25, 0.5, 0.75)
EXPANSION_DELTAS = (1e-3, 1e-4, 1e-5)


def check_energy(steps: Optional[int], deltas: Sequence[float]) -> List[Result]:
    results = []
    for theta in ANGLES:
        closed = wang_energy(theta)
        value = energy_quadrature(wang_xi(theta)).value
        results.append(Result.below("wang_energy", "energy", abs(value - closed) / closed, 1e-6, theta=theta))
    for r in RATIOS:
        closed = emw_energy(r)
        value = energy_quadrature(emw_xi(-r, 1.0)).value
        results.append(Result.below("emw_energy", "energy", abs(value - closed) / closed, 1e-6, r=r))
    return results


def check_flow(steps: Optional[int], deltas: Sequence[float]) -> List[Result]:
    theta = math.pi / 3.0
    driver = wang_lambda_down(theta)
    tip = trace_curve(driver, driver.horizon, steps or 20000).tip
    return [Result.below("wang_tip", "flow", abs(tip - complex(math.cos(theta), math.sin(theta))), 2e-3,
                         theta=theta, steps=steps or 20000)]


def check_emw(steps: Optional[int], deltas: Sequence[float]) -> List[Result]:
    x0, y0 = -1.0, 2.0
    tau = emw_tau(x0, y0)
    hit = hitting_time(emw_xi(x0, y0), x0)
    collision = math.inf if hit is None else abs(hit - 13.0 / 24.0)
    terminal = abs(emw_lambda(x0, y0).scalar(tau) + 2.0 / 3.0)
    return [
        Result.below("emw_collision_time", "emw", collision, 1e-6, x0=x0, y0=y0),
        Result.below("emw_terminal_driver", "emw", terminal, 1e-9, x0=x0, y0=y0),
    ]


def check_sle(steps: Optional[int], deltas: Sequence[float]) -> List[Result]:
    reports = [verify_wang_sle8(math.pi / 3.0), verify_emw_sle44(-1.0, 2.0),
               verify_slit_sle22(1.0 / 3.0), verify_arc_sle33()]
    return [Result.below(r.check, "sle", r.residual, r.tolerance, **r.params) for r in reports]


def check_conserved(steps: Optional[int], deltas: Sequence[float]) -> List[Result]:
    emw = verify_emw_sle44(-1.0, 2.0)
    wang = verify_wang_sle8(math.pi / 3.0)
    return [
        Result.below("emw_rate", "conserved", emw.extra["rate_error"], 1e-6, x0=-1.0, y0=2.0),
        Result.below("wang_conservation", "conserved", wang.extra["conservation"], 1e-8, theta=math.pi / 3.0),
    ]


def _ratio_at(sweep, delta: float) -> float:
    for param, ratio in zip(sweep.params, sweep.ratios):
        if math.isclose(param, delta, rel_tol=1e-12):
            return ratio
    return math.inf


def check_local(steps: Optional[int], deltas: Sequence[float]) -> List[Result]:
    results = []
    driver = linear_driver(1.0)
    grid = sorted(set(deltas) | {1e-4}, reverse=True)
    for name, sweep in (("curve", local_ratio_curve(driver, grid)), ("weld", local_ratio_weld(driver, grid))):
        at = _ratio_at(sweep, 1e-4)
        results.append(Result.below(f"local_{name}_ratio", "local", abs(at - LOCAL_RATIO) / LOCAL_RATIO, 1e-2,
                                    delta=1e-4))
        results.append(Result.below(f"local_{name}_richardson", "local",
                                    abs(sweep.limit - LOCAL_RATIO) / LOCAL_RATIO, 2e-3))
    return results


def check_arc(steps: Optional[int], deltas: Sequence[float]) -> List[Result]:
    results = []
    for row in arc_exact_ratios().rows:
        results.append(Result.below("arc_quadrature", "arc", row.quadrature_error, 1e-8, theta=row.theta))
        results.append(Result.below("arc_ratio", "arc", abs(row.ratio - LOCAL_RATIO), 1e-6, theta=row.theta))
        results.append(Result.below("arc_weld_ratio", "arc", abs(row.weld_ratio - LOCAL_RATIO), 1e-6,
                                    theta=row.theta))
    return results


def check_asymptotic(steps: Optional[int], deltas: Sequence[float]) -> List[Result]:
    tables = asymptotic_ratio_tables((0.01,))
    results = []
    for theta, weld, tip, product in zip(tables.welding.params, tables.welding.ratios,
                                         tables.tip.ratios, tables.product):
        results.append(Result.below("welding_side", "asymptotic", abs(weld - WELD_CONSTANT) / WELD_CONSTANT,
                                    2e-2, theta=theta))
        results.append(Result.below("tip_side", "asymptotic", abs(tip - TIP_CONSTANT) / TIP_CONSTANT,
                                    2e-2, theta=theta))
        results.append(Result.below("product", "asymptotic", abs(product - 1.0), 4e-2, theta=theta))
    return results


def check_varieties(steps: Optional[int], deltas: Sequence[float]) -> List[Result]:
    gamma0 = gamma0_check(steps)
    universal = universal_check(steps)
    return [
        Result.below("gamma0_variety", "varieties", gamma0.variety, 1e-3),
        Result.below("gamma0_rational_map", "varieties", gamma0.secondary, 1e-3),
        Result.below("universal_variety", "varieties", universal.variety, 1e-3),
        Result.below("universal_circle", "varieties", universal.secondary, 1e-3),
        Result.below("universal_tip", "varieties", universal.tip_gap, 5e-3, time=universal.time),
    ]


def check_welding(steps: Optional[int], deltas: Sequence[float]) -> List[Result]:
    theta = math.pi / 3.0
    weld = weld_from_driver(wang_xi(theta), n_pairs=21)
    interior = weld.pairs[:-1]
    errors = [abs(p.y - wang_weld(theta, p.x)) if p.ok else math.inf for p in interior]
    table = emw_weld_table(-1.0, 2.0)
    return [
        Result.below("wang_weld", "welding", max(errors), 1e-5, theta=theta, points=len(interior)),
        Result.below("emw_implicit", "welding", max(p.residual for p in table), 1e-8, x0=-1.0, y0=2.0),
    ]


def check_universality(steps: Optional[int], deltas: Sequence[float]) -> List[Result]:
    wang = wang_universality_check(math.pi / 3.0, math.pi / 4.0, steps)
    results = [Result.below("wang_universality", "universality", wang.residual, 1e-3, **wang.params)]
    for r in (0.25, 0.5):
        report = emw_universality_check(r)
        results.append(Result.below("emw_truncation_ratio", "universality", report.residual, 1e-4, r=r))
    return results


def check_expansions(steps: Optional[int], deltas: Sequence[float]) -> List[Result]:
    driver = linear_driver(1.0)
    curve = infinitesimal_curve_check(driver, EXPANSION_DELTAS)
    weld = infinitesimal_welding_check(driver, EXPANSION_DELTAS)
    return [
        Result.above("curve_expansion_order", "expansions", curve.order, 1.4),
        Result.above("welding_expansion_order", "expansions", weld.order, 1.4),
    ]


def check_distinctness(steps: Optional[int], deltas: Sequence[float]) -> List[Result]:
    report = same_weld_distinct_curves(math.pi / 3.0, steps)
    times = np.linspace(0.0, 0.25, 101)
    symmetric = max(float(np.max(np.abs(wang_xi(math.pi / 2.0).eval(times)))),
                    float(np.max(np.abs(emw_xi(-1.0, 1.0).eval(times)))))
    return [
        Result.above("driver_gap", "distinctness", report.driver_gap, 1e-3, theta=math.pi / 3.0),
        Result.below("symmetric_zero", "distinctness", symmetric, 1e-15, theta=math.pi / 2.0),
    ]


GROUPS: Dict[str, Callable[[Optional[int], Sequence[float]], List[Result]]] = {
    "energy": check_energy,
    "flow": check_flow,
    "emw": check_emw,
    "sle": check_sle,
    "conserved": check_conserved,
    "local": check_local,
    "arc": check_arc,
    "asymptotic": check_asymptotic,
    "varieties": check_varieties,
    "welding": check_welding,
    "universality": check_universality,
    "expansions": check_expansions,
    "distinctness": check_distinctness,
}


def run_suite(only: Sequence[str] = (), steps: Optional[int] = None,
              deltas: Sequence[float] = (1e-3, 1e-4, 1e-5, 1e-6)) -> List[Result]:
    """
    Запускает выбранные группы в фиксированном порядке.
    Ошибка вычисления внутри группы записывается как непройденная проверка.
    """
    selected = [name for name in GROUPS if not only or name in only]
    results: List[Result] = []
    for name in selected:
        logger.info(f"Группа проверок {name}")
        try:
            group = GROUPS[name](steps, deltas)
        except LoewnerLabError as e:
            logger.error(f"Группа {name} завершилась ошибкой: {e}")
            group = [Result(check=f"{name}_error", group=name, params={"error": str(e)},
                            residual=math.inf, tolerance=0.0, passed=False)]
        for result in group:
            logger.info(f"{result.check} {result.params}: {result.residual:.3e} (порог {result.tolerance:g}) "
                        f"{'ok' if result.passed else 'FAIL'}")
        results.extend(group)
    return results
