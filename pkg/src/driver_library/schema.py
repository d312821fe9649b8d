from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

Family = Literal[
    "zero", "linear", "sqrt", "corner",
    "wang", "wang_xi", "gamma0",
    "emw", "emw_xi", "universal", "universal_reflected",
    "arc", "arc_scaled",
]


class WangParams(BaseModel):
    """Параметры минимизатора с заданной точкой e^{iθ}."""

    theta: float = Field(..., gt=0.0, lt=3.141592653589793, description="Угол θ в радианах")
    tau: float = Field(..., description="Конечное время (1 - cos(2θ)/2)/6")
    terminal_xi: float = Field(..., description="ξ_θ(τ) = -(4/3)cos θ")
    weld_x: float = Field(..., description="Левый конец склейки x_θ")
    weld_y: float = Field(..., description="Правый конец склейки y_θ")


class EmwParams(BaseModel):
    """Параметры кривой, склеивающей x0 < 0 < y0."""

    x0: float = Field(..., lt=0.0, description="Левая точка склейки")
    y0: float = Field(..., gt=0.0, description="Правая точка склейки")
    r: float = Field(..., description="Отношение -x0/y0")
    tau: float = Field(..., description="Время столкновения (x0² - 4x0y0 + y0²)/24")
    terminal_lambda: float = Field(..., description="λ(τ) = -(2/3)(x0 + y0)")


class UniversalTruncation(BaseModel):
    """Усечение универсальной кривой Γ, склеивающее концы в отношении r."""

    r: float = Field(..., description="Отношение концов склейки")
    time: float = Field(..., description="t(r)")
    terminal_lambda: float = Field(..., description="λ_Γ(t(r))")
    x: float = Field(..., description="Центрированный левый образ основания")
    y: float = Field(..., description="Центрированный правый образ основания")
    tip_angle: float = Field(..., description="Аргумент кончика β(r)")


class ArcInfo(BaseModel):
    """Дуга окружности, ортогональной ℝ, до заданного угла или отношения."""

    time: float = Field(..., description="Время остановки на [0, 1/8]")
    theta: float = Field(..., description="Аргумент кончика")
    alpha: float = Field(..., description="y/(y - x) для концов склейки")
    tip: complex = Field(..., description="γ₁(t)")
    weld_x: float = Field(..., description="Центрированный левый конец")
    weld_y: float = Field(..., description="Центрированный правый конец")


class SlitInfo(BaseModel):
    """Прямолинейная щель под углом πα, драйвер c√t."""

    alpha: float = Field(..., gt=0.0, lt=1.0, description="Доля гармонической меры справа")
    c: float = Field(..., description="Коэффициент драйвера")
    angle: float = Field(..., description="Угол щели πα")
    weld_x: float = Field(..., description="Левый конец при t = 1")
    weld_y: float = Field(..., description="Правый конец при t = 1")


class DriverSpec(BaseModel):
    """Описание драйвера из библиотеки для CLI и API."""

    model_config = ConfigDict(extra="forbid")

    family: Family = Field(..., description="Семейство драйвера")
    theta: Optional[float] = Field(None, description="Угол в радианах (wang, wang_xi, arc)")
    x0: Optional[float] = Field(None, description="Левая точка склейки (emw)")
    y0: Optional[float] = Field(None, description="Правая точка склейки (emw)")
    ratio: Optional[float] = Field(None, gt=0.0, description="Отношение концов (universal)")
    alpha: Optional[float] = Field(None, gt=0.0, lt=1.0, description="Параметр щели или дуги")
    c: Optional[float] = Field(None, description="Коэффициент c√t (sqrt, corner)")
    slope: float = Field(1.0, description="Наклон линейного драйвера")
    horizon: Optional[float] = Field(None, gt=0.0, description="Конечное время, где оно свободно")
    eps: float = Field(1e-2, gt=0.0, description="Длина куска после угла (corner)")

    @field_validator("theta")
    def validate_theta(cls, v: Optional[float]) -> Optional[float]:
        if v is not None and not 0.0 < v < 3.141592653589793:
            raise ValueError("θ должен лежать в (0, π)")
        return v

    @model_validator(mode="after")
    def validate_required(self) -> "DriverSpec":
        if self.family in ("wang", "wang_xi") and self.theta is None:
            raise ValueError(f"Для семейства {self.family} нужен theta")
        if self.family in ("emw", "emw_xi") and (self.x0 is None or self.y0 is None):
            raise ValueError(f"Для семейства {self.family} нужны x0 и y0")
        return self
