import os
import time
import inspect
import datetime
from loguru import logger as loguru_logger
from functools import wraps

from src.settings import settings

LOG_DIR = settings.log_dir
os.makedirs(LOG_DIR, exist_ok=True)


def get_logger():
    """
    Настраивает логгер для модуля, вызвавшего эту функцию: файл с ротацией
    в подкаталоге LOG_DIR с именем модуля.
    """
    loguru_logger.configure(extra={"run": "-"})
    frame = inspect.stack()[1]
    module_name = os.path.splitext(os.path.basename(frame.filename))[0]

    module_log_dir = os.path.join(LOG_DIR, module_name)
    os.makedirs(module_log_dir, exist_ok=True)

    loguru_logger.add(
        os.path.join(module_log_dir, f"{module_name}.log"),
        format="{time:YYYY-MM-DD HH:mm:ss} | {level} | {extra[run]} | {message}",
        rotation="10 MB",
        compression="zip",
        level=settings.log_level,
        enqueue=True,
    )
    return loguru_logger


def log_run(func):
    """
    Оборачивает команду CLI: отдельный лог-файл на запуск, контекст `run`,
    сообщения о начале, завершении с кодом выхода и ошибке.
    """
    @wraps(func)
    def wrapper(*args, **kwargs):
        run_name = func.__name__.removeprefix("cmd_")
        day = datetime.date.today().isoformat()

        run_log_dir = os.path.join(LOG_DIR, "runs")
        os.makedirs(run_log_dir, exist_ok=True)

        sink_id = loguru_logger.add(
            os.path.join(run_log_dir, f"{run_name}_{day}.log"),
            format="{time:YYYY-MM-DD at HH:mm:ss} | {level} | {name}:{function}:{line} - {message}",
            level="INFO",
            filter=lambda record: record["extra"].get("run") == run_name,
        )
        started = time.perf_counter()
        with loguru_logger.contextualize(run=run_name):
            loguru_logger.info(f"Запуск '{run_name}', ode_rtol={settings.ode_rtol:g}")
            try:
                code = func(*args, **kwargs)
                loguru_logger.info(f"Запуск '{run_name}' завершен с кодом {code} "
                                   f"за {time.perf_counter() - started:.1f} с")
                return code
            except Exception as e:
                loguru_logger.exception(f"Ошибка в запуске '{run_name}': {e}")
                raise
            finally:
                loguru_logger.remove(sink_id)

    return wrapper


app_logger = get_logger()
