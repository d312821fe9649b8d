from typing import List, Literal, Optional

from pydantic import BaseModel, Field

from src.driver_library.schema import DriverSpec


class EnergyReport(BaseModel):
    """Энергия Лёвнера драйвера на отрезке."""

    value: float = Field(..., ge=0.0, description="Значение энергии, inf для бесконечной")
    method: Literal["partition", "quadrature", "analytic"] = Field(..., description="Способ вычисления")
    n: int = Field(..., description="Число отрезков разбиения или панелей")
    grid: str = Field(..., description="Описание сетки")
    error_estimate: float = Field(0.0, description="Оценка погрешности")
    warning: bool = Field(False, description="Квадратура заменена разбиением")
    witness: Optional[List[float]] = Field(None, description="Разбиение, на котором сумма превысила порог")

    def to_json(self) -> dict:
        return {"value": self.value, "method": self.method, "n": self.n,
                "error_estimate": self.error_estimate}


class DyadicGrowth(BaseModel):
    """Суммы по двоичным измельчениям разбиения."""

    parts: List[int] = Field(..., description="Число отрезков на каждом уровне")
    sums: List[float] = Field(..., description="Суммы разбиения")
    increments: List[float] = Field(..., description="Приращения между уровнями")


class ProbeResult(BaseModel):
    """Возмущенный драйвер, склеивающий концы в том же отношении."""

    index: int = Field(..., description="Номер возмущения")
    slope: float = Field(..., description="Линейная поправка, возвращающая отношение")
    ratio: float = Field(..., description="Отношение концов склейки")
    energy: float = Field(..., description="Измеренная энергия")
    bound: float = Field(..., description="Энергия минимизатора")


class EnergyRequest(BaseModel):
    driver: DriverSpec = Field(..., description="Драйвер из библиотеки")
    start: float = Field(0.0, ge=0.0, description="Начало отрезка")
    end: Optional[float] = Field(None, description="Конец отрезка, по умолчанию горизонт")
    method: Literal["quadrature", "partition"] = Field("quadrature", description="Способ вычисления")
    n: Optional[int] = Field(None, gt=0, description="Панели квадратуры или отрезки разбиения")


class ClosedFormEnergy(BaseModel):
    family: Literal["wang", "emw", "arc"] = Field(..., description="Семейство")
    parameter: float = Field(..., description="θ для wang и arc, r для emw")
    value: float = Field(..., description="Энергия по замкнутой формуле")
