"""
Запись артефактов: CSV через pandas, JSON с сортировкой ключей, SVG вручную.
Одинаковые входные данные дают побайтно одинаковые файлы.
"""
import json
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.logger import app_logger as logger

Series = Tuple[str, Sequence[float], Sequence[float]]


def _ensure_dir(path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_csv(path: Path, columns: Dict[str, Sequence[Any]]) -> Path:
    """Таблица с заголовками в порядке ключей columns; float пишутся кратчайшим repr."""
    frame = pd.DataFrame({name: list(values) for name, values in columns.items()})
    frame.to_csv(_ensure_dir(path), index=False, lineterminator="\n")
    logger.info(f"Записан {path}")
    return path


def write_curve_csv(path: Path, times: Sequence[float], points: Sequence[complex]) -> Path:
    points = np.asarray(points, dtype=complex)
    return write_csv(path, {"t": times, "re": points.real, "im": points.imag})


def write_driver_csv(path: Path, times: Sequence[float], values: Sequence[float]) -> Path:
    return write_csv(path, {"t": times, "value": values})


def write_sweep_csv(path: Path, params: Sequence[float], nums: Sequence[float], dens: Sequence[float],
                    ratios: Sequence[float]) -> Path:
    return write_csv(path, {"param": params, "num": nums, "den": dens, "ratio": ratios})


def jsonable(value: Any) -> Any:
    """Неконечные числа записываются строками "inf", "-inf", "nan"."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (np.floating, np.integer)):
        value = value.item()
    if isinstance(value, complex):
        return {"re": jsonable(value.real), "im": jsonable(value.imag)}
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def write_json(path: Path, payload: Dict[str, Any]) -> Path:
    _ensure_dir(path).write_text(json.dumps(jsonable(payload), indent=2, sort_keys=True) + "\n")
    logger.info(f"Записан {path}")
    return path


def _bounds(series: List[Series], unit_circle: bool, real_axis: bool) -> Tuple[float, float, float, float]:
    xs = np.concatenate([np.asarray(s[1], dtype=float) for s in series])
    ys = np.concatenate([np.asarray(s[2], dtype=float) for s in series] + ([np.zeros(1)] if real_axis else []))
    lo_x, hi_x, lo_y, hi_y = float(xs.min()), float(xs.max()), float(ys.min()), float(ys.max())
    if unit_circle:
        lo_x, hi_x, lo_y, hi_y = min(lo_x, -1.0), max(hi_x, 1.0), min(lo_y, -1.0), max(hi_y, 1.0)
    width = max(hi_x - lo_x, 1e-9)
    height = max(hi_y - lo_y, 1e-9)
    side = max(width, height)
    margin = 0.05 * side
    return lo_x - margin, hi_x + margin, lo_y - margin, hi_y + margin


def render_svg(series: List[Series], unit_circle: bool = False, title: Optional[str] = None,
               real_axis: bool = True) -> str:
    """
    Ломаные в координатах данных, ось y смотрит вверх; вещественная ось по умолчанию рисуется.
    viewBox подогнан к данным с полем 5%.
    """
    if not series or any(len(s[1]) == 0 for s in series):
        raise ValueError("Нет данных для рисунка")
    lo_x, hi_x, lo_y, hi_y = _bounds(series, unit_circle, real_axis)
    width, height = hi_x - lo_x, hi_y - lo_y
    stroke = 'vector-effect="non-scaling-stroke" fill="none"'
    lines = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="800" height="{:.0f}" viewBox="{:.6f} {:.6f} {:.6f} {:.6f}">'
        .format(800.0 * height / width if width > 0 else 800.0, lo_x, -hi_y, width, height),
    ]
    if title:
        lines.append(f"<title>{title}</title>")
    if real_axis:
        lines.append(f'<line x1="{lo_x:.6f}" y1="0.000000" x2="{hi_x:.6f}" y2="0.000000" stroke="#999999" {stroke}/>')
    if unit_circle:
        lines.append(f'<circle cx="0.000000" cy="0.000000" r="1.000000" stroke="#cccccc" {stroke}/>')
    palette = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")
    for k, (name, xs, ys) in enumerate(series):
        points = " ".join(f"{x:.6f},{-y:.6f}" for x, y in zip(xs, ys))
        lines.append(f'<polyline id="{name}" points="{points}" stroke="{palette[k % len(palette)]}" {stroke}/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def write_svg(path: Path, series: List[Series], unit_circle: bool = False, title: Optional[str] = None,
              real_axis: bool = True) -> Path:
    _ensure_dir(path).write_text(render_svg(series, unit_circle, title, real_axis))
    logger.info(f"Записан {path}")
    return path
