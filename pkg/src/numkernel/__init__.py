# mixphase numerical kernel
"""Dense linear algebra and the shared exception hierarchy."""

from .errors import (
    MixphaseError,
    ContractError,
    DimensionError,
    PreconditionError,
    DomainError,
    SingularityError,
    AmbiguityError,
    UndefinedPhaseError,
    IntegrationAccuracyError,
    PositivityError,
)
from .linalg import (
    dagger,
    hermitize,
    hermiticity_error,
    unitarity_error,
    eigh_hermitian,
    polar_unitary,
    matrix_exp,
    partial_trace_ancilla,
)

__all__ = [
    "MixphaseError", "ContractError", "DimensionError", "PreconditionError",
    "DomainError", "SingularityError", "AmbiguityError", "UndefinedPhaseError",
    "IntegrationAccuracyError", "PositivityError",
    "dagger", "hermitize", "hermiticity_error", "unitarity_error",
    "eigh_hermitian", "polar_unitary", "matrix_exp", "partial_trace_ancilla",
]
