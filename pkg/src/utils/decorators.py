"""Decorators for mixphase operations."""

import logging
import time
from functools import wraps
from typing import Callable

from .logging_config import log_with_fields


def timed(event: str, logger_name: str = "mixphase") -> Callable:
    """Decorator logging the wall time of each call as a structured event.

    Args:
        event: Event name placed in the log record
        logger_name: Logger to emit on

    Returns:
        Decorated function
    """
    logger = logging.getLogger(logger_name)

    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args, **kwargs):
            start = time.perf_counter()
            try:
                return func(*args, **kwargs)
            finally:
                log_with_fields(
                    logger, "debug", f"{func.__name__} finished",
                    event=event,
                    elapsed_sec=round(time.perf_counter() - start, 6),
                )

        return wrapper

    return decorator
