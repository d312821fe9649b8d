"""
Энергия Лёвнера: суммы по разбиениям, квадратура с заменой u = √t на концах,
замкнутые формулы для семейств минимизаторов.
"""
import math
from typing import List, Optional, Sequence, Union

import numpy as np
from scipy.optimize import brentq

from src.driver_library.service import emw_tau, emw_xi, wang_tip_image, wang_constants
from src.energy.schema import DyadicGrowth, EnergyReport, ProbeResult
from src.logger import app_logger as logger
from src.loewner_flow.schema import Driver
from src.loewner_flow.service import welding_endpoints
from src.settings import settings
from src.utils import BracketError, PreconditionError


def energy_partition(driver: Driver, T: Optional[float] = None,
                     parts: Union[int, Sequence[float], None] = None, start: float = 0.0) -> EnergyReport:
    """
    Σ (Δλ)²/(2Δt) по разбиению [start, T].

    Args:
        parts: число равных отрезков или сама сетка

    Returns:
        EnergyReport; сумма выше settings.partition_infinity считается бесконечной
    """
    T = driver.horizon if T is None else T
    if parts is None:
        parts = settings.partition_fallback_parts
    if isinstance(parts, (int, np.integer)):
        if parts < 1:
            raise PreconditionError(f"Число отрезков должно быть положительным, получено {parts}")
        grid = np.linspace(start, T, int(parts) + 1)
        description = f"uniform[{start:g},{T:g}]x{int(parts)}"
    else:
        grid = np.asarray(parts, dtype=float)
        if grid.size < 2 or np.any(np.diff(grid) <= 0.0):
            raise PreconditionError("Разбиение должно быть строго возрастающим и содержать два узла")
        description = f"custom[{grid[0]:g},{grid[-1]:g}]x{grid.size - 1}"
    values = driver.samples(grid)
    total = float(np.sum(np.diff(values) ** 2 / (2.0 * np.diff(grid))))
    if total > settings.partition_infinity:
        logger.info(f"Сумма разбиения {total:.6g} превысила порог для {driver.label}: энергия бесконечна")
        return EnergyReport(value=math.inf, method="partition", n=grid.size - 1, grid=description,
                            witness=grid.tolist())
    return EnergyReport(value=total, method="partition", n=grid.size - 1, grid=description)


def _gauss_nodes(length: float, panels: int):
    x, w = np.polynomial.legendre.leggauss(settings.quad_nodes)
    edges = np.linspace(0.0, length, panels + 1)
    half = np.diff(edges) / 2.0
    mid = edges[:-1] + half
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _substituted_energy(driver: Driver, start: float, T: float, panels: int) -> Optional[float]:
    """
    (1/2)∫λ̇² с t = start + u² на левой половине и t = T - u² на правой.
    None, если производная неконечна в узлах.
    """
    middle = 0.5 * (start + T)
    u, w = _gauss_nodes(math.sqrt(middle - start), panels)
    left_d = driver.deriv(start + u * u)
    right_d = driver.deriv(T - u * u)
    if not (np.all(np.isfinite(left_d)) and np.all(np.isfinite(right_d))):
        return None
    # 0.5·λ̇²·dt, dt = 2u du
    return float(np.sum(w * u * (left_d ** 2 + right_d ** 2)))


def energy_quadrature(driver: Driver, T: Optional[float] = None, n: Optional[int] = None,
                      start: float = 0.0) -> EnergyReport:
    """
    (1/2)∫_start^T λ̇² составной квадратурой Гаусса–Лежандра.

    Без аналитической производной или при неконечных значениях в узлах
    энергия считается по мелкому разбиению с флагом warning.
    """
    T = driver.horizon if T is None else T
    if T > driver.horizon * (1.0 + 1e-12) or start < 0.0 or start > T:
        raise PreconditionError(f"Отрезок [{start}, {T}] вне [0, {driver.horizon}]")
    panels = n or settings.quad_panels
    grid = f"gauss-legendre {settings.quad_nodes}x{panels} sqrt-ends [{start:g},{T:g}]"
    if T == start:
        return EnergyReport(value=0.0, method="quadrature", n=panels, grid=grid)

    value = _substituted_energy(driver, start, T, panels) if driver.has_derivative else None
    if value is None:
        logger.warning(f"Квадратура недоступна для {driver.label}, переход к разбиению")
        report = energy_partition(driver, T, settings.partition_fallback_parts, start=start)
        return report.model_copy(update={"warning": True})

    coarse = _substituted_energy(driver, start, T, max(panels // 2, 1))
    return EnergyReport(value=value, method="quadrature", n=panels, grid=grid,
                        error_estimate=abs(value - coarse))


def energy_dyadic_growth(driver: Driver, T: Optional[float] = None, levels: int = 12) -> DyadicGrowth:
    """
    Суммы разбиения на 2^k равных отрезках. Для драйвера c√t приращение
    на уровень стремится к (c²/8)·ln 2.
    """
    T = driver.horizon if T is None else T
    parts = [2 ** k for k in range(1, levels + 1)]
    sums = [energy_partition(driver, T, p).value for p in parts]
    return DyadicGrowth(parts=parts, sums=sums, increments=list(np.diff(sums)))


def wang_energy(theta: float) -> float:
    """-8 log sin θ."""
    s = wang_constants(theta)[0]
    return -8.0 * math.log(s)


def emw_energy(r: float) -> float:
    """-8 log(2√r/(1+r)), инвариантна при r -> 1/r."""
    if not r > 0.0:
        raise PreconditionError(f"Отношение должно быть положительным, получено {r}")
    # 2√r/(1+r) = 1 - (1-√r)²/(1+r)
    return max(-8.0 * math.log1p(-(1.0 - math.sqrt(r)) ** 2 / (1.0 + r)), 0.0)


def emw_energy_taylor(r: float) -> float:
    return (r - 1.0) ** 2


def arc_energy(theta: float) -> float:
    """-9 log sin θ для дуги, ортогональной ℝ."""
    s = wang_constants(theta)[0]
    return -9.0 * math.log(s)


def wang_partial_energy(theta: float, t: float) -> float:
    """Энергия γ_θ([0, t]): -4 log(sin²θ + (cos²θ/sin⁴θ)·y(t)⁴)."""
    s, c, _, _ = wang_constants(theta)
    y = wang_tip_image(theta, t).imag
    return max(-4.0 * math.log(s * s + (c * c / s ** 4) * y ** 4), 0.0)


def _perturbed(base: Driver, coefficients: np.ndarray, slope: float, scale: float) -> Driver:
    tau = base.horizon
    modes = np.arange(1, coefficients.size + 1, dtype=float)

    def func(t):
        t = np.asarray(t, dtype=float)
        bumps = np.sin(np.multiply.outer(t, modes) * math.pi / tau) @ coefficients
        return base.func(t) + scale * bumps + slope * t

    def deriv(t):
        t = np.asarray(t, dtype=float)
        bumps = np.cos(np.multiply.outer(t, modes) * math.pi / tau) @ (coefficients * modes * math.pi / tau)
        return base.deriv_func(t) + scale * bumps + slope

    return Driver(func=func, deriv_func=deriv, horizon=tau, label=f"{base.label}+probe")


def minimality_probe(x0: float = -1.0, y0: float = 2.0, count: int = 20, seed: int = 0,
                     modes: int = 4, scale: float = 0.05) -> List[ProbeResult]:
    """
    Возмущения восходящего драйвера кривой, склеивающей (x0, y0).

    Каждое возмущение - сумма синусов с коэффициентами из генератора с seed;
    линейная поправка подбирается так, чтобы склейка на [0, τ] имела то же
    отношение концов. Масштаб энергию не меняет, поэтому достаточно отношения.
    """
    base = emw_xi(x0, y0)
    tau = emw_tau(x0, y0)
    target = -x0 / y0
    bound = emw_energy(target)
    rng = np.random.default_rng(seed)
    results = []
    for index in range(count):
        coefficients = rng.standard_normal(modes) / np.arange(1, modes + 1)

        def mismatch(slope: float) -> float:
            return welding_endpoints(_perturbed(base, coefficients, slope, scale), tau).ratio - target

        lo, hi = -0.5, 0.5
        f_lo, f_hi = mismatch(lo), mismatch(hi)
        for _ in range(6):
            if f_lo * f_hi <= 0.0:
                break
            lo, hi = 2.0 * lo, 2.0 * hi
            f_lo, f_hi = mismatch(lo), mismatch(hi)
        if f_lo * f_hi > 0.0:
            raise BracketError(f"Не удалось вернуть отношение {target} для возмущения {index}")
        slope = brentq(mismatch, lo, hi, xtol=1e-12)
        driver = _perturbed(base, coefficients, slope, scale)
        ratio = welding_endpoints(driver, tau).ratio
        energy = energy_quadrature(driver, tau).value
        results.append(ProbeResult(index=index, slope=slope, ratio=ratio, energy=energy, bound=bound))
    return results
