from typing import List, Optional

from pydantic import BaseModel, Field

from src.driver_library.schema import DriverSpec


class WeldPair(BaseModel):
    x: float = Field(..., description="Левая точка x < ξ(0)")
    y: Optional[float] = Field(None, description="Правая точка с тем же временем столкновения")
    tau: Optional[float] = Field(None, description="Общее время столкновения")
    ok: bool = Field(True, description="Пара найдена")
    message: str = Field("", description="Причина неудачи")


class WeldingMap(BaseModel):
    """Склейка как набор пар с общими временами столкновения."""

    pairs: List[WeldPair] = Field(..., description="Пары в порядке роста |x|")
    x_end: float = Field(..., description="Левый конец склеенного отрезка")
    y_end: float = Field(..., description="Правый конец склеенного отрезка")
    horizon: float = Field(..., description="Время T")

    @property
    def solved(self) -> List[WeldPair]:
        return [pair for pair in self.pairs if pair.ok]

    def is_orientation_reversing(self) -> bool:
        """x убывает, y возрастает, времена возрастают вдоль пар."""
        pairs = self.solved
        return all(
            a.x > b.x and a.y < b.y and a.tau < b.tau
            for a, b in zip(pairs, pairs[1:])
        )


class RatioTrajectory(BaseModel):
    times: List[float] = Field(..., description="Моменты времени")
    ratios: List[float] = Field(..., description="-x(t)/y(t) для центрированных точек")
    collision_time: float = Field(..., description="Время столкновения первой из точек")


class ExpansionFit(BaseModel):
    """Сравнение с асимптотикой при малых δ."""

    deltas: List[float] = Field(..., description="Значения δ")
    residuals: List[float] = Field(..., description="Остатки асимптотики")
    order: float = Field(..., description="Наклон остатков в логарифмическом масштабе")
    slope: float = Field(..., description="Производная драйвера в нуле")


class UniversalityWelding(BaseModel):
    theta: float = Field(..., description="Угол θ универсального драйвера")
    alpha: float = Field(..., description="Угол α усеченной кривой")
    u_alpha: float = Field(..., description="Левая точка u_α")
    phi_u: float = Field(..., description="φ_θ(u_α)")
    scale: float = Field(..., description="|u_α|/|x_α|")
    ratio_theta: float = Field(..., description="-u_α/φ_θ(u_α)")
    ratio_alpha: float = Field(..., description="-x_α/y_α")
    residual: float = Field(..., description="|ratio_theta - ratio_alpha|")


class CornerRatio(BaseModel):
    c: float = Field(..., description="Коэффициент щели после угла")
    eps: float = Field(..., description="Длина куска после угла")
    alpha: float = Field(..., description="y/(y - x) численной склейки")
    expected: float = Field(..., description="α(c) для щели")


class NumericWeldRequest(BaseModel):
    driver: DriverSpec = Field(..., description="Восходящий драйвер")
    horizon: Optional[float] = Field(None, description="Время T, по умолчанию горизонт")
    n_pairs: int = Field(20, gt=0, le=200, description="Число пар")


class EmwWeldPoint(BaseModel):
    x: float
    y: float
    residual: float
