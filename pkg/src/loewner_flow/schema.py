from typing import Callable, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.driver_library.schema import DriverSpec
from src.utils import DriverEvaluationError

UNBOUNDED = float("inf")


def _central_difference(func: Callable, t: np.ndarray, horizon: float) -> np.ndarray:
    h = 1e-6 * max(1.0, horizon)
    lo = np.clip(t - h, 0.0, horizon)
    hi = np.clip(t + h, 0.0, horizon)
    width = np.where(hi > lo, hi - lo, 1.0)
    return np.where(hi > lo, (func(hi) - func(lo)) / width, 0.0)


class Driver(BaseModel):
    """Вещественная функция времени на [0, horizon] с метаданными семейства."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    func: Callable[[np.ndarray], np.ndarray] = Field(..., description="Векторизованная функция t -> λ(t)")
    deriv_func: Optional[Callable[[np.ndarray], np.ndarray]] = Field(
        None, description="Аналитическая производная; ±inf означает неограниченный наклон"
    )
    horizon: float = Field(..., ge=0.0, description="Конечное время T")
    label: str = Field(..., description="Метка семейства")

    def eval(self, t):
        """
        Значение драйвера. Время зажимается в [0, horizon].

        Args:
            t: число или массив моментов времени

        Returns:
            float для скаляра, иначе np.ndarray той же формы
        """
        arr = np.clip(np.asarray(t, dtype=float), 0.0, self.horizon)
        out = np.broadcast_to(np.asarray(self.func(arr), dtype=float), arr.shape)
        if out.ndim == 0:
            return float(out)
        return np.array(out)

    def deriv(self, t):
        """
        Производная драйвера: аналитическая, если задана, иначе центральная разность.
        Неограниченный односторонний предел возвращается как ±inf.
        """
        arr = np.clip(np.asarray(t, dtype=float), 0.0, self.horizon)
        if self.deriv_func is not None:
            out = np.asarray(self.deriv_func(arr), dtype=float)
        else:
            out = _central_difference(lambda s: np.asarray(self.func(s), dtype=float), arr, self.horizon)
        out = np.broadcast_to(out, arr.shape)
        if out.ndim == 0:
            return float(out)
        return np.array(out)

    def scalar(self, t: float) -> float:
        """Быстрое скалярное значение для правых частей ОДУ."""
        return float(self.func(min(max(t, 0.0), self.horizon)))

    @property
    def has_derivative(self) -> bool:
        return self.deriv_func is not None

    def samples(self, times: np.ndarray) -> np.ndarray:
        """Значения на сетке с проверкой конечности."""
        values = self.eval(times)
        bad = ~np.isfinite(values)
        if np.any(bad):
            idx = int(np.argmax(bad))
            raise DriverEvaluationError(float(times[idx]), float(values[idx]))
        return values


class FlowPoint(BaseModel):
    """Образ точки под потоком Лёвнера."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    position: complex = Field(..., description="g_t(z0) или h_t(z0) в последний достигнутый момент")
    time: float = Field(..., description="Последний достигнутый момент")
    alive: bool = Field(..., description="Решение существует до запрошенного момента")
    swallow_time: Optional[float] = Field(None, description="Момент столкновения с драйвером")


class CurveTrace(BaseModel):
    """Кривая, параметризованная ёмкостью."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    times: np.ndarray = Field(..., description="Возрастающая сетка времени")
    points: np.ndarray = Field(..., description="Комплексные точки γ(t_k)")
    capacity: float = Field(..., description="Полуплоскостная ёмкость собранного отображения")
    steps: int = Field(..., description="Число элементарных щелей")
    graded: bool = Field(False, description="Сетка сгущена к концу")

    @field_validator("points")
    def validate_points(cls, v: np.ndarray) -> np.ndarray:
        if np.any(v.imag < -1e-12):
            raise ValueError("Точки кривой должны лежать в замкнутой верхней полуплоскости")
        return v

    @property
    def tip(self) -> complex:
        return complex(self.points[-1])

    def scaled(self, factor: float, shift: complex = 0.0) -> "CurveTrace":
        """Кривая factor·(γ + shift) с пересчитанным временем."""
        return CurveTrace(
            times=self.times * factor ** 2,
            points=(self.points + shift) * factor,
            capacity=self.capacity * factor ** 2,
            steps=self.steps,
            graded=self.graded,
        )


class BaseImages(BaseModel):
    """Образы двух простых концов в основании кривой."""

    time: float = Field(..., description="Момент T")
    left: float = Field(..., description="g_T(0-)")
    right: float = Field(..., description="g_T(0+)")
    driver_value: float = Field(..., description="λ(T)")

    @property
    def centered_left(self) -> float:
        return self.left - self.driver_value

    @property
    def centered_right(self) -> float:
        return self.right - self.driver_value

    @property
    def ratio(self) -> float:
        """-x/y для центрированных концов."""
        return -self.centered_left / self.centered_right

    @property
    def alpha(self) -> float:
        """y/(y-x) для центрированных концов."""
        return self.centered_right / (self.centered_right - self.centered_left)


class DriverSamples(BaseModel):
    """Сэмплы драйвера для выгрузки."""

    label: str = Field(..., description="Метка семейства")
    horizon: float = Field(..., description="Конечное время")
    t: List[float] = Field(..., description="Моменты времени")
    value: List[float] = Field(..., description="Значения драйвера")


class TraceRequest(BaseModel):
    driver: DriverSpec = Field(..., description="Драйвер из библиотеки")
    time: Optional[float] = Field(None, gt=0.0, description="Время трассировки, по умолчанию время семейства")
    n: Optional[int] = Field(None, gt=0, le=200000, description="Число элементарных щелей")
    samples: int = Field(200, gt=0, le=5000, description="Число выдаваемых точек")


class TraceResponse(BaseModel):
    t: List[float] = Field(..., description="Моменты времени")
    re: List[float] = Field(..., description="Re γ(t)")
    im: List[float] = Field(..., description="Im γ(t)")
    capacity: float = Field(..., description="Полуплоскостная ёмкость")
    simple: bool = Field(..., description="Самопересечений не найдено")


class HittingTimeRequest(BaseModel):
    driver: DriverSpec = Field(..., description="Восходящий драйвер из библиотеки")
    x0: float = Field(..., description="Точка на вещественной оси")


class HittingTimeResponse(BaseModel):
    x0: float
    hitting_time: Optional[float] = Field(None, description="Время столкновения или null, если его нет до горизонта")



