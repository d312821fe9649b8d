from typing import List, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class SleZeroConfig(BaseModel):
    """Начальные данные SLE₀(ρ₁,…,ρₙ)."""

    direction: Literal["up", "down"] = Field(..., description="Направление потока")
    rho: List[float] = Field(..., min_length=1, description="Веса силовых точек")
    start_driver: float = Field(0.0, description="Начальное значение драйвера")
    start_force_points: List[complex] = Field(..., min_length=1, description="Начальные силовые точки")

    @field_validator("start_force_points")
    def validate_half_plane(cls, v: List[complex]) -> List[complex]:
        if any(complex(p).imag < 0.0 for p in v):
            raise ValueError("Силовые точки должны лежать в замкнутой верхней полуплоскости")
        return v

    @model_validator(mode="after")
    def validate_lengths(self) -> "SleZeroConfig":
        if len(self.rho) != len(self.start_force_points):
            raise ValueError("Число весов не совпадает с числом силовых точек")
        return self


class SleZeroTrajectory(BaseModel):
    """Драйвер и силовые точки на равномерной сетке до остановки."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    config: SleZeroConfig = Field(..., description="Начальные данные")
    times: np.ndarray = Field(..., description="Сетка времени")
    driver: np.ndarray = Field(..., description="Значения драйвера")
    force_points: np.ndarray = Field(..., description="Силовые точки, форма (len(times), n)")
    stop_reason: Literal["horizon", "collision"] = Field(..., description="Причина остановки")
    stop_time: float = Field(..., description="Момент остановки")

    def centered(self) -> np.ndarray:
        return self.force_points - self.driver[:, None]


class SleReport(BaseModel):
    """Итог сравнения траектории SLE₀ с замкнутой формулой."""

    check: str = Field(..., description="Название проверки")
    params: dict = Field(default_factory=dict, description="Параметры")
    residual: float = Field(..., description="Максимальное отклонение")
    tolerance: float = Field(..., description="Допуск")
    extra: dict = Field(default_factory=dict, description="Дополнительные величины")

    @property
    def passed(self) -> bool:
        return bool(self.residual < self.tolerance)


class SleIntegrateRequest(BaseModel):
    config: SleZeroConfig
    horizon: float = Field(..., gt=0.0, description="Конечное время")
    n: int = Field(200, gt=0, le=10000, description="Число отрезков выходной сетки")


class SleIntegrateResponse(BaseModel):
    times: List[float]
    driver: List[float]
    force_points_re: List[List[float]]
    force_points_im: List[List[float]]
    stop_reason: str
    stop_time: float
