"""
Замкнутые формулы драйверов: минимизаторы с заданной точкой, кривые с заданной
склейкой, универсальная кривая Γ, дуга окружности, щели c√t и угол.

Все функции векторизованы по времени.
"""
import math
from typing import Optional, Tuple

import numpy as np

from src.driver_library.schema import (
    ArcInfo, DriverSpec, EmwParams, SlitInfo, UniversalTruncation, WangParams,
)
from src.loewner_flow.schema import Driver, DriverSamples
from src.loewner_flow.service import reverse_driver
from src.utils import PreconditionError

SQRT3 = math.sqrt(3.0)
SQRT_PI = math.sqrt(math.pi)
GAMMA0_HORIZON = 1.0 / 12.0
UNIVERSAL_HORIZON = math.pi / 6.0
ARC_HORIZON = 1.0 / 8.0


def zero_driver(horizon: float = 1.0) -> Driver:
    return Driver(func=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
                  deriv_func=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
                  horizon=horizon, label="zero")


def linear_driver(slope: float = 1.0, horizon: float = 1.0) -> Driver:
    """λ(t) = slope·t, энергия slope²T/2."""
    return Driver(func=lambda t: slope * np.asarray(t, dtype=float),
                  deriv_func=lambda t: np.full_like(np.asarray(t, dtype=float), slope),
                  horizon=horizon, label=f"linear({slope:g})")


def _sqrt_deriv(c: float, t: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        out = c / (2.0 * np.sqrt(t))
    return np.where(t > 0.0, out, math.copysign(math.inf, c) if c else 0.0)


def sqrt_driver(c: float, horizon: float = 1.0) -> Driver:
    """λ(t) = c√t, порождает прямую щель."""
    return Driver(func=lambda t: c * np.sqrt(np.asarray(t, dtype=float)),
                  deriv_func=lambda t: _sqrt_deriv(c, np.asarray(t, dtype=float)),
                  horizon=horizon, label=f"sqrt({c:g})")


def slit_alpha(c: float) -> float:
    return 0.5 * (1.0 - c / math.sqrt(c * c + 16.0))


def slit_c(alpha: float) -> float:
    if not 0.0 < alpha < 1.0:
        raise PreconditionError(f"α должен лежать в (0, 1), получено {alpha}")
    return 2.0 * (1.0 - 2.0 * alpha) / math.sqrt(alpha * (1.0 - alpha))


def sqrt_slit(alpha: Optional[float] = None, c: Optional[float] = None) -> SlitInfo:
    """
    Щель для драйвера c√t: α и c пересчитываются друг в друга,
    концы склейки при t = 1.
    """
    if alpha is None and c is None:
        raise PreconditionError("Нужен alpha или c")
    if alpha is None:
        alpha = slit_alpha(c)
    else:
        c = slit_c(alpha)
    return SlitInfo(
        alpha=alpha, c=c, angle=math.pi * alpha,
        weld_x=-2.0 * math.sqrt((1.0 - alpha) / alpha),
        weld_y=2.0 * math.sqrt(alpha / (1.0 - alpha)),
    )


def slit_map(alpha: float, x: float, y: float):
    """F(z) = (z - y)^α (z - x)^{1-α}: из ℍ в ℍ без щели, F(x) = F(y) = 0."""
    def func(z):
        z = np.asarray(z, dtype=complex)
        z = z.real + 1j * np.abs(z.imag)
        return np.exp(alpha * np.log(z - y) + (1.0 - alpha) * np.log(z - x))
    return func


def corner_driver(c: float, eps: float = 1e-2) -> Driver:
    """0 на [0, 1], затем c√(t - 1) на [1, 1 + eps]: вертикальный отрезок и щель под углом."""
    def func(t):
        s = np.maximum(np.asarray(t, dtype=float) - 1.0, 0.0)
        return c * np.sqrt(s)

    def deriv(t):
        t = np.asarray(t, dtype=float)
        return np.where(t < 1.0, 0.0, _sqrt_deriv(c, np.maximum(t - 1.0, 0.0)))

    return Driver(func=func, deriv_func=deriv, horizon=1.0 + eps, label=f"corner({c:g})")


# Минимизаторы с заданной точкой

def _check_theta(theta: float) -> None:
    if not 0.0 < theta < math.pi:
        raise PreconditionError(f"θ должен лежать в (0, π), получено {theta}")


def wang_constants(theta: float) -> Tuple[float, float, float, float]:
    _check_theta(theta)
    s, c = math.sin(theta), math.cos(theta)
    if abs(c) < 1e-15:
        c = 0.0
    return s, c, c / s ** 3, c * c / 12.0 + s * s / 4.0


def wang_tau(theta: float) -> float:
    return wang_constants(theta)[3]


def _wang_y_squared(b: float, remaining: np.ndarray) -> np.ndarray:
    """Вещественный корень кубического уравнения для y² через гиперболическую форму Кардано."""
    if b == 0.0:
        return 4.0 * remaining
    ab = abs(b)
    return (2.0 / ab) * np.sinh(np.arcsinh(6.0 * ab * remaining) / 3.0)


def wang_weld_endpoints(theta: float) -> Tuple[float, float]:
    """(x_θ, y_θ): концы отрезка, склеиваемого минимизатором."""
    s, c, _, _ = wang_constants(theta)
    return (-math.sqrt(s ** 3 / (s - theta * c)),
            math.sqrt(s ** 3 / (s + (math.pi - theta) * c)))


def wang_params(theta: float) -> WangParams:
    s, c, _, tau = wang_constants(theta)
    x, y = wang_weld_endpoints(theta)
    return WangParams(theta=theta, tau=tau, terminal_xi=-4.0 * c / 3.0, weld_x=x, weld_y=y)


def wang_xi(theta: float, horizon: Optional[float] = None) -> Driver:
    """
    Восходящий драйвер ξ_θ. Формула определена при всех t ≥ 0; по умолчанию
    горизонт равен τ_θ.
    """
    _, _, b, tau = wang_constants(theta)
    horizon = tau if horizon is None else horizon
    if b == 0.0:
        return zero_driver(horizon)

    def func(t):
        y2 = _wang_y_squared(b, np.asarray(t, dtype=float))
        return -(4.0 / 3.0) * b * y2 ** 1.5

    def deriv(t):
        y2 = _wang_y_squared(b, np.asarray(t, dtype=float))
        return -8.0 * b * np.sqrt(y2) / (b * b * y2 * y2 + 1.0)

    return Driver(func=func, deriv_func=deriv, horizon=horizon, label=f"wang_xi({theta:.12g})")


def wang_lambda_down(theta: float) -> Driver:
    """Нисходящий драйвер λ_θ(t) = (4/3)(cos θ - x(t)) на [0, τ_θ]."""
    _, c, b, tau = wang_constants(theta)
    if b == 0.0:
        return zero_driver(tau)

    def func(t):
        y2 = _wang_y_squared(b, tau - np.asarray(t, dtype=float))
        return (4.0 / 3.0) * (c - b * y2 ** 1.5)

    def deriv(t):
        y2 = _wang_y_squared(b, tau - np.asarray(t, dtype=float))
        return 8.0 * b * np.sqrt(y2) / (b * b * y2 * y2 + 1.0)

    return Driver(func=func, deriv_func=deriv, horizon=tau, label=f"wang({theta:.12g})")


def wang_tip_image(theta: float, t: float) -> complex:
    """Центрированный образ z(t) = x(t) + iy(t) точки e^{iθ} при нисходящем потоке."""
    s, c, b, tau = wang_constants(theta)
    if not 0.0 <= t <= tau * (1.0 + 1e-12):
        raise PreconditionError(f"Время {t} вне [0, {tau}]")
    if t == 0.0:
        return complex(c, s)
    y = math.sqrt(max(float(_wang_y_squared(b, np.asarray(max(tau - t, 0.0)))), 0.0))
    return complex(b * y ** 3, y)


def gamma0_xi() -> Driver:
    """Предельный драйвер ξ₀(t) = -(8/√3)√t на [0, 1/12]."""
    k = -8.0 / SQRT3
    return Driver(func=lambda t: k * np.sqrt(np.asarray(t, dtype=float)),
                  deriv_func=lambda t: _sqrt_deriv(k, np.asarray(t, dtype=float)),
                  horizon=GAMMA0_HORIZON, label="gamma0_xi")


def gamma0_lambda() -> Driver:
    """Нисходящая форма ξ₀: кривая из 0 в 1 с углом π/3 к ℝ."""
    return reverse_driver(gamma0_xi(), GAMMA0_HORIZON)


# Кривые с заданной склейкой

def _check_emw(x0: float, y0: float) -> None:
    if not (x0 < 0.0 < y0):
        raise PreconditionError(f"Нужно x0 < 0 < y0, получено ({x0}, {y0})")


def emw_tau(x0: float, y0: float) -> float:
    return (x0 * x0 - 4.0 * x0 * y0 + y0 * y0) / 24.0


def emw_params(x0: float, y0: float) -> EmwParams:
    _check_emw(x0, y0)
    return EmwParams(x0=x0, y0=y0, r=-x0 / y0, tau=emw_tau(x0, y0),
                     terminal_lambda=-(2.0 / 3.0) * (x0 + y0))


def _emw_formula(x0: float, y0: float, horizon: float, label: str) -> Driver:
    total = x0 + y0
    if total == 0.0:
        return zero_driver(horizon)
    width = y0 - x0
    d = width ** 2 / (24.0 ** (2.0 / 3.0) * abs(total) ** (2.0 / 3.0))
    a = width ** 6 / (576.0 * total ** 2)
    sign = math.copysign(1.0, total)

    def func(t):
        t = np.asarray(t, dtype=float)
        radicand = np.maximum(a - t * t, 0.0)
        core = d + 2.0 * np.real((np.sqrt(radicand) + 1j * t) ** (2.0 / 3.0))
        return -(16.0 / SQRT3) * sign * t ** 1.5 * core ** -1.5

    def deriv(t):
        t = np.asarray(t, dtype=float)
        lam = func(t)
        den = (32.0 / 3.0) * t - lam * lam
        singular = den <= 1e-12 * np.maximum(1.0, (32.0 / 3.0) * t)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = 16.0 * lam / den
        out = np.where(singular, np.copysign(np.inf, lam), out)
        return np.where(t > 0.0, out, 0.0)

    return Driver(func=func, deriv_func=deriv, horizon=horizon, label=label)


def emw_lambda(x0: float, y0: float) -> Driver:
    """Нисходящий драйвер λ_{x0,y0} на [0, τ]; λ ≡ 0 при y0 = -x0."""
    _check_emw(x0, y0)
    return _emw_formula(x0, y0, emw_tau(x0, y0), f"emw({x0:g},{y0:g})")


def emw_xi(x0: float, y0: float) -> Driver:
    """Восходящий драйвер, склеивающий x0 с y0 в момент τ."""
    return reverse_driver(emw_lambda(x0, y0), emw_tau(x0, y0))


def universal_gamma_lambda() -> Driver:
    """Драйвер универсальной кривой Γ: формула при (x0, y0) = (0, 2√π) на [0, π/6]."""
    return _emw_formula(0.0, 2.0 * SQRT_PI, UNIVERSAL_HORIZON, "universal")


def reflected_universal_lambda() -> Driver:
    """-λ_Γ: отражение Γ, покрывающее отношения r > 1."""
    base = universal_gamma_lambda()
    return Driver(func=lambda t: -base.func(t), deriv_func=lambda t: -base.deriv_func(t),
                  horizon=UNIVERSAL_HORIZON, label="universal_reflected")


def universal_truncation_time(r: float) -> float:
    """t(r) = (π/6)(1 - r)(r² + 4r + 1)/(1 + r)³ для r ∈ (0, 1]."""
    if not 0.0 < r <= 1.0:
        raise PreconditionError(f"Отношение должно лежать в (0, 1], получено {r}")
    return (math.pi / 6.0) * (1.0 - r) * (r * r + 4.0 * r + 1.0) / (1.0 + r) ** 3


def universal_tip_angle(r: float) -> float:
    """
    β(r): аргумент кончика кривой, склеивающей концы в отношении r.
    При r > 1 используется отражение β(1/r) = π - β(r).
    """
    if not r > 0.0:
        raise PreconditionError(f"Отношение должно быть положительным, получено {r}")
    if r > 1.0:
        return math.pi - universal_tip_angle(1.0 / r)
    if r == 1.0:
        return math.pi / 2.0
    ratio = (2.0 * (1.0 + r) + (1.0 - r) * math.log(r)) / (math.pi * (1.0 - r))
    return 0.5 * (1.5 * math.pi - math.atan(ratio))


def universal_truncation(r: float) -> UniversalTruncation:
    """Время, конечное значение драйвера и концы склейки для Γ[0, t(r)]."""
    time = universal_truncation_time(r)
    s = -1.0 / r
    x = -2.0 * SQRT_PI * math.sqrt(max(-(1.0 + s), 0.0)) / (1.0 - s) ** 1.5
    return UniversalTruncation(
        r=r, time=time,
        terminal_lambda=-(4.0 * SQRT_PI / 3.0) * ((1.0 - r) / (1.0 + r)) ** 1.5,
        x=x, y=s * x, tip_angle=universal_tip_angle(r),
    )


# Дуга окружности, ортогональной ℝ

def arc_time_for_angle(theta: float) -> float:
    _check_theta(theta)
    return (1.0 - math.sin(theta) ** 4) / 8.0


def arc_time_for_ratio(alpha: float) -> float:
    if not 0.0 < alpha < 1.0:
        raise PreconditionError(f"α должен лежать в (0, 1), получено {alpha}")
    return 0.125 - 2.0 * alpha ** 2 * (1.0 - alpha) ** 2


def circular_arc_point(t: float) -> complex:
    """γ₁(t) на окружности |z - 1/2| = 1/2."""
    root = math.sqrt(max(1.0 - 8.0 * t, 0.0))
    return complex(1.0 - root, math.sqrt(root) * math.sqrt(1.0 - root))


def circular_arc_endpoints(t: float) -> Tuple[float, float]:
    """Центрированные концы склейки куска дуги, выросшего к моменту t."""
    root = math.sqrt(max(1.0 - 8.0 * t, 0.0))
    w = math.sqrt(1.0 - root)
    return -1.0 + root - w, -1.0 + root + w


def circular_arc_weld(t: float, x: float) -> float:
    """φ_t(x) = -√(1-8t)x/(√(1-8t) - 2x)."""
    root = math.sqrt(max(1.0 - 8.0 * t, 0.0))
    return -root * x / (root - 2.0 * x)


def circular_arc(theta: Optional[float] = None, alpha: Optional[float] = None) -> Tuple[Driver, ArcInfo]:
    """
    Драйвер дуги λ₁(t) = (3/2)(1 - √(1-8t)) и время остановки для угла θ
    или отношения α. Без параметров дуга доводится до точки 1.
    """
    if theta is not None:
        time = arc_time_for_angle(theta)
    elif alpha is not None:
        time = arc_time_for_ratio(alpha)
    else:
        time = ARC_HORIZON

    def deriv(t):
        t = np.asarray(t, dtype=float)
        left = 1.0 - 8.0 * t
        with np.errstate(divide="ignore"):
            return np.where(left > 0.0, 6.0 / np.sqrt(np.maximum(left, 0.0)), np.inf)

    driver = Driver(func=lambda t: 1.5 * (1.0 - np.sqrt(np.maximum(1.0 - 8.0 * np.asarray(t, dtype=float), 0.0))),
                    deriv_func=deriv, horizon=ARC_HORIZON, label="arc")
    x, y = circular_arc_endpoints(time)
    tip = circular_arc_point(time)
    info = ArcInfo(time=time, theta=math.atan2(tip.imag, tip.real) if time > 0.0 else math.pi / 2.0,
                   alpha=y / (y - x) if time > 0.0 else 0.5, tip=tip, weld_x=x, weld_y=y)
    return driver, info


def arc_scaled_driver() -> Driver:
    """Дуга, растянутая в 2√2 раз: λ(t) = 3√2(1 - √(1-t)) на [0, 1]."""
    k = 3.0 * math.sqrt(2.0)

    def deriv(t):
        left = 1.0 - np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            return np.where(left > 0.0, k / (2.0 * np.sqrt(np.maximum(left, 0.0))), np.inf)

    return Driver(func=lambda t: k * (1.0 - np.sqrt(np.maximum(1.0 - np.asarray(t, dtype=float), 0.0))),
                  deriv_func=deriv, horizon=1.0, label="arc_scaled")


def arc_sle33_base_images(t: float) -> Tuple[float, float]:
    """g_t(0-), g_t(0+) для растянутой дуги: √2 - √2s ∓ 2√2w, s = √(1-t), w = √(1-s)."""
    s = math.sqrt(max(1.0 - t, 0.0))
    w = math.sqrt(1.0 - s)
    r2 = math.sqrt(2.0)
    return r2 - r2 * s - 2.0 * r2 * w, r2 - r2 * s + 2.0 * r2 * w


# Фабрика

def build_driver(spec: DriverSpec) -> Driver:
    """Драйвер по описанию; общая точка входа для CLI и API."""
    family = spec.family
    if family == "zero":
        return zero_driver(spec.horizon or 1.0)
    if family == "linear":
        return linear_driver(spec.slope, spec.horizon or 1.0)
    if family == "sqrt":
        c = spec.c if spec.c is not None else (slit_c(spec.alpha) if spec.alpha is not None else 0.0)
        return sqrt_driver(c, spec.horizon or 1.0)
    if family == "corner":
        return corner_driver(spec.c if spec.c is not None else 1.0, spec.eps)
    if family == "wang":
        return wang_lambda_down(spec.theta)
    if family == "wang_xi":
        return wang_xi(spec.theta, spec.horizon)
    if family == "gamma0":
        return gamma0_lambda()
    if family == "emw":
        return emw_lambda(spec.x0, spec.y0)
    if family == "emw_xi":
        return emw_xi(spec.x0, spec.y0)
    if family == "universal":
        return universal_gamma_lambda()
    if family == "universal_reflected":
        return reflected_universal_lambda()
    if family == "arc":
        return circular_arc(spec.theta, spec.alpha)[0]
    if family == "arc_scaled":
        return arc_scaled_driver()
    raise PreconditionError(f"Неизвестное семейство {family}")


def trace_target(spec: DriverSpec) -> Tuple[Driver, float]:
    """Нисходящий драйвер и время трассировки для семейства."""
    driver = build_driver(spec)
    if spec.family == "arc":
        return driver, circular_arc(spec.theta, spec.alpha)[1].time
    if spec.family in ("universal", "universal_reflected") and spec.ratio is not None:
        if spec.ratio > 1.0:
            return reflected_universal_lambda(), universal_truncation_time(1.0 / spec.ratio)
        return driver, universal_truncation_time(spec.ratio)
    return driver, driver.horizon


def sample_driver(driver: Driver, n: int = 200, T: Optional[float] = None) -> DriverSamples:
    """Значения драйвера в n + 1 равноотстоящих точках [0, T]."""
    if n < 1:
        raise PreconditionError(f"Число отрезков должно быть положительным, получено {n}")
    T = driver.horizon if T is None else T
    times = np.linspace(0.0, T, n + 1)
    return DriverSamples(label=driver.label, horizon=T, t=times.tolist(), value=driver.samples(times).tolist())
