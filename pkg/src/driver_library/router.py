from typing import Optional

from fastapi import APIRouter, HTTPException, Query, status
from pydantic import ValidationError

from src.driver_library.schema import DriverSpec, EmwParams, Family, WangParams
from src.driver_library.service import build_driver, emw_params, sample_driver, wang_params
from src.logger import app_logger as logger
from src.loewner_flow.schema import DriverSamples
from src.utils import error_handler_http

drivers = APIRouter(prefix='/drivers', tags=['Drivers'])


def spec_or_422(**kwargs) -> DriverSpec:
    """DriverSpec из параметров запроса; ошибка валидации превращается в 422."""
    try:
        return DriverSpec(**{k: v for k, v in kwargs.items() if v is not None})
    except ValidationError as e:
        logger.error(f"Некорректное описание драйвера: {e}")
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=e.errors(include_url=False))


@drivers.get(
    "/{family}/samples",
    response_model=DriverSamples,
    status_code=status.HTTP_200_OK,
    summary="Сэмплы драйвера",
    description="Значения драйвера семейства на равномерной сетке [0, horizon]"
)
@error_handler_http(message="Ошибка вычисления драйвера")
def get_driver_samples(
        family: Family,
        theta: Optional[float] = None,
        x0: Optional[float] = None,
        y0: Optional[float] = None,
        alpha: Optional[float] = None,
        c: Optional[float] = None,
        slope: Optional[float] = None,
        horizon: Optional[float] = None,
        n: int = Query(200, gt=0, le=20000, description="Число отрезков сетки"),
) -> DriverSamples:
    spec = spec_or_422(family=family, theta=theta, x0=x0, y0=y0, alpha=alpha, c=c, slope=slope, horizon=horizon)
    logger.info(f"Запрошены сэмплы драйвера {spec.family}")
    return sample_driver(build_driver(spec), n)


@drivers.get(
    "/wang/params",
    response_model=WangParams,
    summary="Параметры минимизатора с точкой",
    description="τ_θ, ξ_θ(τ_θ) и концы склейки для угла θ"
)
@error_handler_http()
def get_wang_params(theta: float = Query(..., description="Угол в радианах")) -> WangParams:
    return wang_params(theta)


@drivers.get(
    "/emw/params",
    response_model=EmwParams,
    summary="Параметры минимизатора со склейкой",
    description="Отношение, время столкновения и конечное значение драйвера для (x0, y0)"
)
@error_handler_http()
def get_emw_params(x0: float = Query(...), y0: float = Query(...)) -> EmwParams:
    return emw_params(x0, y0)
