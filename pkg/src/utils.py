from concurrent.futures import ThreadPoolExecutor
from functools import wraps
from typing import Callable, Iterable, List, TypeVar

from fastapi import HTTPException, status

from src.logger import app_logger as logger
from src.settings import settings

T = TypeVar("T")
R = TypeVar("R")


class LoewnerLabError(Exception):
    """Базовая ошибка вычислений."""


class PreconditionError(LoewnerLabError, ValueError):
    """Входные данные вне области определения операции."""


class DriverEvaluationError(PreconditionError):
    """Драйвер вернул неконечное значение."""

    def __init__(self, time: float, value: float):
        self.time = time
        self.value = value
        super().__init__(f"Неконечное значение драйвера {value!r} в момент t={time!r}")


class IntegrationError(LoewnerLabError):
    """Интегратор не дошел до конечного времени и не зафиксировал столкновение."""


class BracketError(LoewnerLabError):
    """Не удалось зажать корень в отрезок."""


def run_parallel(func: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """
    Применяет func к элементам, используя не более settings.threads потоков.

    Порядок результатов совпадает с порядком входа, поэтому вывод не зависит
    от числа потоков.
    """
    items = list(items)
    if settings.threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=settings.threads) as executor:
        return list(executor.map(func, items))


def error_handler_http(
        status_code: int = status.HTTP_500_INTERNAL_SERVER_ERROR,
        message: str = "Ошибка вычисления",
        exceptions: tuple = (LoewnerLabError,)
):
    """Декоратор для поднятия HTTPException при обнаружении исключения.
    :param status_code: возвращаемый HTTP статус код при исключении.
    :param message: возвращаемое сообщение при исключении.
    :param exceptions: кортеж обрабатываемых исключений.

    PreconditionError всегда превращается в 422.
    """

    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except PreconditionError as error:
                logger.error(f"Некорректные параметры в {func.__name__}: {error}")
                raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(error))
            except exceptions as error:
                logger.error(f"Ошибка в {func.__name__}: {error}")
                raise HTTPException(status_code=status_code, detail=f"{message}: {error}")
        return wrapper
    return decorator
