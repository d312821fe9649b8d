from typing import Dict, Optional

from fastapi import APIRouter, Query, status

from src.families.schema import CurveCheck
from src.families.service import gamma0_check, universal_check
from src.logger import app_logger as logger
from src.utils import error_handler_http

families = APIRouter(prefix='/families', tags=['Families'])


@families.get(
    "/varieties",
    response_model=Dict[str, CurveCheck],
    status_code=status.HTTP_200_OK,
    summary="Алгебраические многообразия",
    description="Невязки многочленов на трассах γ₀ и Γ, Im R на γ₀ и расстояние Γ² до окружности"
)
@error_handler_http(message="Ошибка проверки многообразий")
def get_varieties(n: Optional[int] = Query(None, gt=0, le=200000, description="Число щелей трассы")) -> Dict[str, CurveCheck]:
    logger.info("Проверка многообразий γ₀ и Γ")
    return {"gamma0": gamma0_check(n), "universal": universal_check(n)}
