from typing import List

from fastapi import APIRouter, Query, status

from src.compare.schema import AsymptoticTables, LocalRatioRequest, RatioSweep
from src.compare.service import asymptotic_ratio_tables, local_ratio_curve, local_ratio_weld
from src.driver_library.service import linear_driver
from src.logger import app_logger as logger
from src.utils import error_handler_http

compare = APIRouter(prefix='/compare', tags=['Compare'])


@compare.get(
    "/asymptotics",
    response_model=AsymptoticTables,
    status_code=status.HTTP_200_OK,
    summary="Асимптотики отношений энергий",
    description="Отношения к энергии минимизатора с точкой при θ = π/2 ± ε со стороны склейки и кончика"
)
@error_handler_http(message="Ошибка построения таблиц")
def get_asymptotics(eps: List[float] = Query([0.01], description="Отступы от π/2")) -> AsymptoticTables:
    logger.info(f"Асимптотические таблицы для ε={eps}")
    return asymptotic_ratio_tables(eps)


@compare.post(
    "/local",
    response_model=RatioSweep,
    summary="Локальное отношение 9/8",
    description="Отношения энергий линейного драйвера на [0, δ] к энергиям минимизаторов"
)
@error_handler_http(message="Ошибка перебора δ")
def post_local(request: LocalRatioRequest) -> RatioSweep:
    driver = linear_driver(request.slope)
    if request.side == "weld":
        return local_ratio_weld(driver, request.deltas)
    return local_ratio_curve(driver, request.deltas)
