# mixphase utilities
"""Logging helpers and decorators for mixphase."""

from .logging_config import setup_logging, log_with_fields
from .decorators import timed

__all__ = ["setup_logging", "log_with_fields", "timed"]
