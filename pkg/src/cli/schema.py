import math
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

Group = Literal[
    "energy", "flow", "emw", "sle", "conserved", "local", "arc", "asymptotic",
    "varieties", "welding", "universality", "expansions", "distinctness",
]
Format = Literal["csv", "json", "svg"]


class RunConfig(BaseModel):
    """Параметры запуска команды. Значения по умолчанию воспроизводят набор проверок."""

    model_config = ConfigDict(extra="forbid")

    command: Literal["trace", "verify", "compare", "serve"] = Field(..., description="Команда")
    family: Optional[str] = Field(None, description="Семейство для trace")
    theta: Optional[float] = Field(None, description="Угол в радианах")
    x0: Optional[float] = Field(None, description="Левая точка склейки")
    y0: Optional[float] = Field(None, description="Правая точка склейки")
    ratio: Optional[float] = Field(None, description="Отношение концов склейки")
    alpha: Optional[float] = Field(None, description="Параметр щели или дуги")
    c: Optional[float] = Field(None, description="Коэффициент c√t")
    steps: Optional[int] = Field(None, gt=0, description="Число элементарных щелей трассы")
    tol: Optional[float] = Field(None, gt=0.0, description="Относительная точность интегратора")
    out: str = Field("out", description="Каталог вывода")
    formats: List[Format] = Field(default_factory=list, description="Форматы вывода")
    only: List[Group] = Field(default_factory=list, description="Группы проверок")
    deltas: List[float] = Field([1e-3, 1e-4, 1e-5, 1e-6], description="Сетка δ для локальных отношений")
    unit_circle: bool = Field(False, description="Рисовать единичную окружность")

    @field_validator("deltas")
    def validate_deltas(cls, v: List[float]) -> List[float]:
        if not v:
            raise ValueError("Пустая сетка δ")
        if any(not d > 0.0 for d in v):
            raise ValueError("Значения δ должны быть положительными")
        return v

    def echo(self, rtol: float) -> Dict[str, Any]:
        """Конфигурация для отчета; эффективная точность записывается всегда."""
        data = self.model_dump(exclude={"out"})
        data["ode_rtol"] = rtol
        return data


class VerificationResult(BaseModel):
    """Строка отчета проверки."""

    model_config = ConfigDict(populate_by_name=True)

    check: str = Field(..., description="Название проверки")
    group: Group = Field(..., description="Группа")
    params: Dict[str, Any] = Field(default_factory=dict, description="Параметры")
    residual: float = Field(..., description="Измеренная величина")
    tolerance: float = Field(..., description="Порог")
    passed: bool = Field(..., alias="pass", description="Проверка пройдена")

    @classmethod
    def below(cls, check: str, group: str, residual: float, tolerance: float, **params) -> "VerificationResult":
        """Пройдено, если residual < tolerance."""
        ok = math.isfinite(residual) and residual < tolerance
        return cls(check=check, group=group, params=params, residual=residual, tolerance=tolerance, passed=ok)

    @classmethod
    def above(cls, check: str, group: str, residual: float, tolerance: float, **params) -> "VerificationResult":
        """Пройдено, если residual >= tolerance."""
        ok = math.isfinite(residual) and residual >= tolerance
        return cls(check=check, group=group, params=params, residual=residual, tolerance=tolerance, passed=ok)


class VerificationReport(BaseModel):
    config: Dict[str, Any] = Field(default_factory=dict, description="Конфигурация запуска")
    results: List[VerificationResult] = Field(default_factory=list, description="Результаты")

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self) -> Dict[str, Any]:
        return {
            "schema": 1,
            "config": self.config,
            "results": [r.model_dump(by_alias=True) for r in self.results],
            "passed": self.passed,
        }


class VerifyRequest(BaseModel):
    only: List[Group] = Field(default_factory=list, description="Группы проверок, пусто значит все")
    steps: Optional[int] = Field(None, gt=0, le=200000, description="Число щелей трассы")
