"""
Командная строка: trace, verify, compare, serve.

Коды выхода: 0 при успехе, 1 при непройденной проверке или ошибке вычисления,
2 при некорректных параметрах.
"""
import argparse
import math
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
from pydantic import ValidationError

from src.cli.output import write_csv, write_curve_csv, write_driver_csv, write_json, write_svg, write_sweep_csv
from src.cli.schema import RunConfig, VerificationReport
from src.cli.suite import GROUPS, run_suite
from src.compare.service import (
    arc_exact_ratios, asymptotic_ratio_tables, local_ratio_curve, local_ratio_weld, same_weld_distinct_curves,
)
from src.driver_library.schema import DriverSpec
from src.driver_library.service import linear_driver, trace_target
from src.logger import app_logger as logger
from src.logger import log_run
from src.loewner_flow.trace import capacity_residual, is_simple, trace_curve
from src.settings import settings
from src.utils import LoewnerLabError, PreconditionError

TOOL_NAME = "loewner-lab"
TRACE_FAMILIES = ("wang", "emw", "gamma0", "universal", "arc", "sqrt", "linear", "zero")
SUPPORTED = {"trace": ("csv", "json", "svg"), "verify": ("json",), "compare": ("csv", "json", "svg")}
ASYMPTOTIC_EPS = (0.1, 0.05, 0.02, 0.01)


def _formats(config: RunConfig) -> List[str]:
    supported = SUPPORTED[config.command]
    if not config.formats:
        return list(supported)
    return [f for f in supported if f in config.formats]


def _driver_spec(config: RunConfig) -> DriverSpec:
    fields = {"theta": config.theta, "x0": config.x0, "y0": config.y0, "ratio": config.ratio,
              "alpha": config.alpha, "c": config.c}
    return DriverSpec(family=config.family, **{k: v for k, v in fields.items() if v is not None})


@log_run
def cmd_trace(config: RunConfig) -> int:
    """Трасса кривой семейства: CSV кривой и драйвера, SVG, JSON со сводкой."""
    driver, time = trace_target(_driver_spec(config))
    trace = trace_curve(driver, time, config.steps)
    out = Path(config.out)
    stem = f"trace_{config.family}"
    formats = _formats(config)
    if "csv" in formats:
        write_curve_csv(out / f"{stem}.csv", trace.times, trace.points)
        write_driver_csv(out / f"driver_{config.family}.csv", trace.times, driver.samples(trace.times))
    if "svg" in formats:
        write_svg(out / f"{stem}.svg", [(config.family, trace.points.real, trace.points.imag)],
                  unit_circle=config.unit_circle, title=driver.label)
    if "json" in formats:
        write_json(out / f"{stem}.json", {
            "schema": 1,
            "config": config.echo(settings.ode_rtol),
            "results": {
                "label": driver.label, "time": time, "steps": trace.steps, "tip": trace.tip,
                "capacity": trace.capacity, "capacity_residual": capacity_residual(trace),
                "simple": is_simple(trace), "graded": trace.graded,
            },
        })
    print(f"{driver.label}: γ({time:.6g}) = {trace.tip.real:.9f}{trace.tip.imag:+.9f}i")
    return 0


@log_run
def cmd_verify(config: RunConfig) -> int:
    """Набор проверок; код 1, если хотя бы одна не пройдена."""
    report = VerificationReport(config=config.echo(settings.ode_rtol),
                                results=run_suite(config.only, config.steps, config.deltas))
    if "json" in _formats(config):
        write_json(Path(config.out) / "verify.json", report.to_json())
    failed = [r for r in report.results if not r.passed]
    print(f"Проверок: {len(report.results)}, не пройдено: {len(failed)}")
    for result in failed:
        print(f"  FAIL {result.group}/{result.check} {result.params}: {result.residual:.3e} "
              f"(порог {result.tolerance:g})")
    return 0 if report.passed else 1


def _log_axis(values: Sequence[float]) -> List[float]:
    return [math.log10(v) for v in values]


@log_run
def cmd_compare(config: RunConfig) -> int:
    """Перебор δ для 9/8, точное 9/8 дуги, таблицы у π/2 и пара кривых с одной склейкой."""
    out = Path(config.out)
    formats = _formats(config)
    driver = linear_driver(1.0)
    curve = local_ratio_curve(driver, config.deltas)
    weld = local_ratio_weld(driver, config.deltas)
    arc = arc_exact_ratios()
    tables = asymptotic_ratio_tables(ASYMPTOTIC_EPS)
    same = same_weld_distinct_curves(config.theta or math.pi / 3.0, config.steps)

    if "csv" in formats:
        for name, sweep in (("local_curve", curve), ("local_weld", weld),
                            ("asymptotic_welding", tables.welding), ("asymptotic_tip", tables.tip)):
            write_sweep_csv(out / f"{name}.csv", sweep.params, sweep.numerators, sweep.denominators, sweep.ratios)
        write_sweep_csv(out / "arc.csv", [r.theta for r in arc.rows], [r.quadrature for r in arc.rows],
                        [r.wang for r in arc.rows], [r.quadrature / r.wang for r in arc.rows])
        for name, rows in (("same_weld_wang", same.wang_curve), ("same_weld_emw", same.emw_curve)):
            rows = np.asarray(rows, dtype=float)
            write_csv(out / f"{name}.csv", {"t": rows[:, 0], "re": rows[:, 1], "im": rows[:, 2]})
    if "svg" in formats:
        write_svg(out / "local.svg", [("curve", _log_axis(curve.params), curve.ratios),
                                      ("weld", _log_axis(weld.params), weld.ratios)], real_axis=False)
        write_svg(out / "asymptotic.svg", [("welding", tables.welding.params, tables.welding.ratios),
                                           ("tip", tables.tip.params, tables.tip.ratios)], real_axis=False)
        write_svg(out / "same_weld.svg", [
            ("wang", [r[1] for r in same.wang_curve], [r[2] for r in same.wang_curve]),
            ("emw", [r[1] for r in same.emw_curve], [r[2] for r in same.emw_curve]),
        ], unit_circle=config.unit_circle)
    if "json" in formats:
        write_json(out / "compare.json", {
            "schema": 1,
            "config": config.echo(settings.ode_rtol),
            "results": {
                "local_curve": curve.model_dump(), "local_weld": weld.model_dump(),
                "arc": arc.model_dump(), "asymptotic": tables.model_dump(),
                "same_weld": same.model_dump(exclude={"wang_curve", "emw_curve"}),
            },
        })
    print(f"9/8: кривая {curve.limit:.6f}, склейка {weld.limit:.6f}; "
          f"(π/4)² ~ {tables.welding.ratios[-1]:.5f}, (4/π)² ~ {tables.tip.ratios[-1]:.5f}")
    return 0


def cmd_serve(config: RunConfig) -> int:
    import uvicorn

    from src.app import app
    uvicorn.run(app, host=settings.api_host, port=settings.api_port)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog=TOOL_NAME,
        description="Минимизаторы энергии Лёвнера: трассы, проверки и сравнения энергий.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--steps", type=int, help="Число элементарных щелей трассы")
        parser.add_argument("--tol", type=float,
                            help="Относительная точность интегратора ОДУ (settings.ode_rtol); допуски проверок не меняет")
        parser.add_argument("--out", default=settings.output_dir, help="Каталог вывода")
        parser.add_argument("--format", dest="formats", action="append", choices=("csv", "json", "svg"),
                            help="Формат вывода; можно повторять")

    tr = sub.add_parser("trace", help="Трасса кривой семейства")
    tr.add_argument("--family", required=True, choices=TRACE_FAMILIES)
    tr.add_argument("--theta", type=float, help="Угол в радианах")
    tr.add_argument("--x0", type=float)
    tr.add_argument("--y0", type=float)
    tr.add_argument("--ratio", type=float, help="Отношение концов для universal")
    tr.add_argument("--alpha", type=float, help="Параметр щели или дуги")
    tr.add_argument("--c", type=float, help="Коэффициент c√t")
    tr.add_argument("--unit-circle", action="store_true", help="Рисовать единичную окружность")
    common(tr)

    vf = sub.add_parser("verify", help="Набор проверок")
    vf.add_argument("--only", action="append", choices=tuple(GROUPS), help="Группа; можно повторять")
    vf.add_argument("--deltas", type=float, nargs="+", default=[1e-3, 1e-4, 1e-5, 1e-6])
    common(vf)

    cp = sub.add_parser("compare", help="Сравнения энергий")
    cp.add_argument("--theta", type=float, help="Угол для пары кривых с одной склейкой")
    cp.add_argument("--deltas", type=float, nargs="+", default=[1e-3, 1e-4, 1e-5, 1e-6])
    cp.add_argument("--unit-circle", action="store_true")
    common(cp)

    sub.add_parser("serve", help="HTTP API")
    return p


COMMANDS = {"trace": cmd_trace, "verify": cmd_verify, "compare": cmd_compare, "serve": cmd_serve}


def main(argv: Optional[Sequence[str]] = None) -> int:
    ns = _build_parser().parse_args(argv)
    values: Dict = {k: v for k, v in vars(ns).items() if v is not None}
    rtol = settings.ode_rtol
    try:
        config = RunConfig(**values)
        if config.tol is not None:
            settings.ode_rtol = config.tol
        return COMMANDS[config.command](config)
    except (PreconditionError, ValidationError) as e:
        logger.error(f"Некорректные параметры: {e}")
        print(f"[ERROR] {e}", file=sys.stderr)
        return 2
    except LoewnerLabError as e:
        logger.error(f"Ошибка вычисления: {e}")
        print(f"[ERROR] {e}", file=sys.stderr)
        return 1
    finally:
        settings.ode_rtol = rtol


if __name__ == "__main__":
    sys.exit(main())
