from fastapi import APIRouter, Query, status

from src.driver_library.service import build_driver
from src.energy.schema import ClosedFormEnergy, EnergyReport, EnergyRequest
from src.energy.service import arc_energy, emw_energy, energy_partition, energy_quadrature, wang_energy
from src.logger import app_logger as logger
from src.utils import error_handler_http

energy = APIRouter(prefix='/energy', tags=['Energy'])


@energy.post(
    "/quadrature",
    response_model=EnergyReport,
    status_code=status.HTTP_200_OK,
    summary="Энергия Лёвнера драйвера",
    description="Квадратура Гаусса–Лежандра с заменой u = √t на концах или сумма по разбиению"
)
@error_handler_http(message="Ошибка вычисления энергии")
def post_energy(request: EnergyRequest) -> EnergyReport:
    driver = build_driver(request.driver)
    end = request.end if request.end is not None else driver.horizon
    logger.info(f"Энергия {driver.label} на [{request.start}, {end}] методом {request.method}")
    if request.method == "partition":
        return energy_partition(driver, end, request.n, start=request.start)
    return energy_quadrature(driver, end, request.n, start=request.start)


@energy.get(
    "/closed-form",
    response_model=ClosedFormEnergy,
    summary="Энергия по замкнутой формуле",
    description="-8 log sin θ, -8 log(2√r/(1+r)) или -9 log sin θ"
)
@error_handler_http()
def get_closed_form(family: str = Query(..., pattern="^(wang|emw|arc)$"),
                    parameter: float = Query(..., description="θ для wang и arc, r для emw")) -> ClosedFormEnergy:
    formulas = {"wang": wang_energy, "emw": emw_energy, "arc": arc_energy}
    return ClosedFormEnergy(family=family, parameter=parameter, value=formulas[family](parameter))
