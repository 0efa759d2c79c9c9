"""Purifications, connecting unitaries and system+ancilla realisations."""

from .construct import (
    DEFAULT_DESIGNATED,
    build_connecting_unitary,
    build_Usa,
    build_W_path,
    compensating_unitary,
    parallel_transport_correction,
    purified_fringe,
    purify_path,
    transport_residual,
)
from .models import PurifiedPath, UnitaryPath

__all__ = [
    "UnitaryPath",
    "PurifiedPath",
    "DEFAULT_DESIGNATED",
    "build_connecting_unitary",
    "parallel_transport_correction",
    "transport_residual",
    "compensating_unitary",
    "build_W_path",
    "build_Usa",
    "purify_path",
    "purified_fringe",
]
