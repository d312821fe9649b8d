import math
from typing import List, Literal, Optional

from pydantic import BaseModel, Field, model_validator


class RatioSweep(BaseModel):
    """Отношения энергий на сетке параметра."""

    label: str = Field(..., description="Название перебора")
    params: List[float] = Field(..., description="Сетка параметра (δ или θ)")
    numerators: List[float] = Field(..., description="Энергии в числителе")
    denominators: List[float] = Field(..., description="Энергии в знаменателе")
    ratios: List[float] = Field(..., description="Отношения")
    limit: Optional[float] = Field(None, description="Экстраполированный предел")
    order: Optional[float] = Field(None, description="Наблюдаемый порядок сходимости")
    expected: Optional[float] = Field(None, description="Теоретический предел")
    cross_check: List[float] = Field(default_factory=list, description="Отклонение от разложения кончика")

    @model_validator(mode="after")
    def validate_energies(self) -> "RatioSweep":
        if any(v < 0.0 for v in self.numerators + self.denominators):
            raise ValueError("Энергии должны быть неотрицательными")
        return self

    def rows(self) -> List[List[float]]:
        return [list(r) for r in zip(self.params, self.numerators, self.denominators, self.ratios)]


class ArcRatioRow(BaseModel):
    theta: float = Field(..., description="Аргумент кончика дуги")
    time: float = Field(..., description="Время остановки t(θ)")
    quadrature: float = Field(..., description="Квадратура энергии драйвера дуги")
    closed_form: float = Field(..., description="-9 log sin θ")
    wang: float = Field(..., description="-8 log sin θ")
    ratio: float = Field(..., description="Отношение к энергии минимизатора с точкой")
    weld_ratio: float = Field(..., description="Отношение к энергии минимизатора со склейкой")
    quadrature_error: float = Field(..., description="|квадратура - замкнутая формула|")


class ArcRatioReport(BaseModel):
    rows: List[ArcRatioRow] = Field(..., description="Строки по углам")

    @property
    def worst_quadrature_error(self) -> float:
        return max(r.quadrature_error for r in self.rows)


class AsymptoticTables(BaseModel):
    """Пара таблиц у θ = π/2: со стороны склейки и со стороны кончика."""

    welding: RatioSweep
    tip: RatioSweep
    product: List[float] = Field(..., description="Произведения отношений на общей сетке")


class SameWeldReport(BaseModel):
    """Минимизатор с точкой и минимизатор со склейкой тех же концов."""

    theta: float = Field(..., description="Угол")
    weld_x: float = Field(..., description="x_θ")
    weld_y: float = Field(..., description="y_θ")
    driver_gap: float = Field(..., description="sup |ξ_θ - ξ_EMW| на общем отрезке")
    curve_distance: float = Field(..., description="Расстояние Хаусдорфа между трассами")
    wang_tip_angle: float = Field(..., description="Аргумент кончика минимизатора с точкой")
    emw_tip_angle: float = Field(..., description="Аргумент кончика минимизатора со склейкой")
    wang_curve: List[List[float]] = Field(default_factory=list, description="Трасса (t, re, im)")
    emw_curve: List[List[float]] = Field(default_factory=list, description="Трасса (t, re, im)")

    @property
    def emw_closer_to_vertical(self) -> bool:
        return abs(self.emw_tip_angle - math.pi / 2.0) <= abs(self.wang_tip_angle - math.pi / 2.0)


class LocalRatioRequest(BaseModel):
    slope: float = Field(1.0, description="Наклон линейного драйвера")
    deltas: List[float] = Field([1e-3, 1e-4, 1e-5, 1e-6], min_length=1, description="Сетка δ")
    side: Literal["curve", "weld"] = Field("curve", description="Кривая или склейка")
