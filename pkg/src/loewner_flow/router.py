from fastapi import APIRouter, status

from src.driver_library.service import build_driver, trace_target
from src.logger import app_logger as logger
from src.loewner_flow.schema import HittingTimeRequest, HittingTimeResponse, TraceRequest, TraceResponse
from src.loewner_flow.service import hitting_time
from src.loewner_flow.trace import is_simple, trace_curve
from src.utils import error_handler_http

flow = APIRouter(prefix='/flow', tags=['Loewner flow'])


@flow.post(
    "/trace",
    response_model=TraceResponse,
    status_code=status.HTTP_200_OK,
    summary="Трасса кривой по драйверу",
    description="Точки γ(t) композицией элементарных щелей, ёмкость и проверка простоты"
)
@error_handler_http(message="Ошибка трассировки")
def post_trace(request: TraceRequest) -> TraceResponse:
    driver, time = trace_target(request.driver)
    time = request.time or time
    logger.info(f"Трассировка {driver.label} до t={time:.6g}")
    trace = trace_curve(driver, time, request.n, samples=request.samples)
    return TraceResponse(t=trace.times.tolist(), re=trace.points.real.tolist(), im=trace.points.imag.tolist(),
                         capacity=trace.capacity, simple=is_simple(trace))


@flow.post(
    "/hitting-time",
    response_model=HittingTimeResponse,
    summary="Время столкновения точки",
    description="Первое столкновение восходящей траектории точки x0 с драйвером"
)
@error_handler_http(message="Ошибка интегрирования")
def post_hitting_time(request: HittingTimeRequest) -> HittingTimeResponse:
    driver = build_driver(request.driver)
    return HittingTimeResponse(x0=request.x0, hitting_time=hitting_time(driver, request.x0))
