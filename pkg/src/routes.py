from fastapi import APIRouter
from src.driver_library.router import drivers
from src.loewner_flow.router import flow
from src.energy.router import energy
from src.welding.router import welding
from src.sle_zero.router import sle
from src.families.router import families
from src.compare.router import compare
from src.cli.router import verify

router = APIRouter(prefix='/api/v1')
router.include_router(drivers)
router.include_router(flow)
router.include_router(energy)
router.include_router(welding)
router.include_router(sle)
router.include_router(families)
router.include_router(compare)
router.include_router(verify)
