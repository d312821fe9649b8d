import os

from pydantic_settings import BaseSettings
from functools import lru_cache
from dotenv import load_dotenv

load_dotenv()


class Settings(BaseSettings):
    debug: bool = os.getenv("LOEWNER_LAB_DEBUG", "false").lower() == "true"

    # Параллелизм перебора параметров
    threads: int = int(os.getenv("LOEWNER_LAB_THREADS", 1))

    # Интегратор (DOP853)
    ode_rtol: float = float(os.getenv("LOEWNER_LAB_ODE_RTOL", 1e-12))
    ode_atol: float = float(os.getenv("LOEWNER_LAB_ODE_ATOL", 1e-14))
    collision_tol: float = float(os.getenv("LOEWNER_LAB_COLLISION_TOL", 1e-9))
    flow_s_max: float = float(os.getenv("LOEWNER_LAB_FLOW_S_MAX", 1e3))
    flow_min_steps: int = int(os.getenv("LOEWNER_LAB_FLOW_MIN_STEPS", 32))

    # Квадратура энергии
    quad_nodes: int = int(os.getenv("LOEWNER_LAB_QUAD_NODES", 32))
    quad_panels: int = int(os.getenv("LOEWNER_LAB_QUAD_PANELS", 64))
    partition_fallback_parts: int = int(os.getenv("LOEWNER_LAB_PARTITION_PARTS", 2 ** 16))
    partition_infinity: float = float(os.getenv("LOEWNER_LAB_PARTITION_INFINITY", 1e6))

    # Трассировка кривых
    trace_steps: int = int(os.getenv("LOEWNER_LAB_TRACE_STEPS", 20000))
    trace_samples: int = int(os.getenv("LOEWNER_LAB_TRACE_SAMPLES", 1000))

    output_dir: str = os.getenv("LOEWNER_LAB_OUT", "out")

    # Логи
    log_dir: str = os.getenv("LOEWNER_LAB_LOG_DIR", os.path.join(os.path.dirname(os.path.abspath(__file__)), "logging"))
    log_level: str = os.getenv("LOEWNER_LAB_LOG_LEVEL", "DEBUG")

    api_host: str = os.getenv("LOEWNER_LAB_API_HOST", "127.0.0.1")
    api_port: int = int(os.getenv("LOEWNER_LAB_API_PORT", 8001))


@lru_cache()
def get_settings() -> Settings:
    return Settings()


settings = get_settings()
