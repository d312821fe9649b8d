from typing import List

from fastapi import APIRouter, Query, status

from src.driver_library.service import build_driver
from src.logger import app_logger as logger
from src.utils import error_handler_http
from src.welding.schema import EmwWeldPoint, NumericWeldRequest, WeldingMap
from src.welding.service import emw_weld_table, weld_from_driver

welding = APIRouter(prefix='/welding', tags=['Welding'])


@welding.post(
    "/numeric",
    response_model=WeldingMap,
    status_code=status.HTTP_200_OK,
    summary="Численная склейка",
    description="Пары x < ξ(0) < y с равными временами столкновения при восходящем потоке"
)
@error_handler_http(message="Ошибка вычисления склейки")
def post_numeric_weld(request: NumericWeldRequest) -> WeldingMap:
    driver = build_driver(request.driver)
    logger.info(f"Численная склейка {driver.label}, пар: {request.n_pairs}")
    return weld_from_driver(driver, request.horizon, request.n_pairs)


@welding.get(
    "/emw",
    response_model=List[EmwWeldPoint],
    summary="Склейка минимизатора с заданными концами",
    description="Решения неявного уравнения W(r, T(φ(x))) = W(r, T(x)) во внутренних точках [x0, 0]"
)
@error_handler_http(message="Ошибка решения уравнения склейки")
def get_emw_weld(x0: float = Query(..., lt=0.0), y0: float = Query(..., gt=0.0),
                 n: int = Query(20, gt=0, le=500)) -> List[EmwWeldPoint]:
    return emw_weld_table(x0, y0, n)
