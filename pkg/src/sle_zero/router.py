from fastapi import APIRouter, status

from src.logger import app_logger as logger
from src.sle_zero.schema import SleIntegrateRequest, SleIntegrateResponse
from src.sle_zero.service import integrate
from src.utils import error_handler_http

sle = APIRouter(prefix='/sle', tags=['SLE0'])


@sle.post(
    "/integrate",
    response_model=SleIntegrateResponse,
    status_code=status.HTTP_200_OK,
    summary="Детерминированный SLE₀ с силовыми точками",
    description="Драйвер и силовые точки до горизонта или до первого столкновения"
)
@error_handler_http(message="Ошибка интегрирования SLE₀")
def post_integrate(request: SleIntegrateRequest) -> SleIntegrateResponse:
    logger.info(f"SLE₀ {request.config.direction} с весами {request.config.rho} до t={request.horizon}")
    traj = integrate(request.config, request.horizon, request.n)
    return SleIntegrateResponse(
        times=traj.times.tolist(), driver=traj.driver.tolist(),
        force_points_re=traj.force_points.real.tolist(), force_points_im=traj.force_points.imag.tolist(),
        stop_reason=traj.stop_reason, stop_time=traj.stop_time,
    )
