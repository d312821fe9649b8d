from typing import List, Literal, Optional

from pydantic import BaseModel, Field


class VarietyResidual(BaseModel):
    """Значение многочлена многообразия в точке, без нормировки."""

    point: complex = Field(..., description="Точка плоскости")
    residual: float = Field(..., description="Значение многочлена")


class FamilyOdeReport(BaseModel):
    """Решение системы ОДУ семейства против замкнутых формул."""

    family: Literal["wang", "emw"] = Field(..., description="Семейство")
    params: dict = Field(..., description="Параметры семейства")
    times: List[float] = Field(..., description="Сетка времени")
    driver: List[float] = Field(..., description="Драйвер из ОДУ")
    driver_error: float = Field(..., description="Отклонение драйвера от замкнутой формулы")
    path_error: float = Field(..., description="Отклонение траекторий точек")
    conservation: float = Field(..., description="Нарушение сохраняющейся величины")
    identity_error: float = Field(0.0, description="Нарушение вспомогательного тождества")


class CurveCheck(BaseModel):
    """Проверки трассы предельной или универсальной кривой."""

    name: str = Field(..., description="Кривая")
    variety: float = Field(..., description="max |многочлен| по точкам трассы")
    secondary: float = Field(..., description="Im R для γ₀, расстояние Γ² до окружности для Γ")
    endpoint: complex = Field(..., description="Конец трассы")
    time: Optional[float] = Field(None, description="Момент конца трассы, если он раньше горизонта")
    tip_gap: Optional[float] = Field(None, description="|конец трассы - tip_point|")
    terminal_angle: float = Field(0.0, description="Угол секущей последнего процента трассы к ℝ")


class MapOrders(BaseModel):
    zero: float = Field(..., description="Порядок R в 0")
    one: float = Field(..., description="Порядок R - 1 в 1")
    infinity: float = Field(..., description="Порядок R в ∞")


class UniversalityReport(BaseModel):
    params: dict = Field(..., description="Параметры")
    residual: float = Field(..., description="Расстояние или отклонение отношения")
    extra: dict = Field(default_factory=dict, description="Промежуточные величины")


class AngleTrajectory(BaseModel):
    times: List[float] = Field(..., description="Моменты t < T")
    angles: List[float] = Field(..., description="arg(g_t(γ(T)) - λ(t))")
    final: float = Field(..., description="Последний угол")
    monotone: bool = Field(..., description="Углы монотонно приближаются к π/2")
