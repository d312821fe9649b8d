from fastapi import APIRouter, status

from src.cli.output import jsonable
from src.cli.schema import VerificationReport, VerifyRequest
from src.cli.suite import run_suite
from src.logger import app_logger as logger
from src.settings import settings
from src.utils import error_handler_http

verify = APIRouter(prefix='/verify', tags=['Verify'])


@verify.post(
    "",
    status_code=status.HTTP_200_OK,
    summary="Набор проверок",
    description="Запускает выбранные группы проверок и возвращает отчет schema 1"
)
@error_handler_http(message="Ошибка выполнения проверок")
def post_verify(request: VerifyRequest) -> dict:
    logger.info(f"Проверки по API: {request.only or 'все группы'}")
    report = VerificationReport(
        config={"only": request.only, "steps": request.steps, "ode_rtol": settings.ode_rtol},
        results=run_suite(request.only, request.steps),
    )
    return jsonable(report.to_json())
