"""Exception hierarchy shared by every mixphase module.

Each exception carries a stable ``code`` so the CLI can map it to an error
payload and an exit status without string matching.
"""

from typing import Any, Dict, Optional


class MixphaseError(Exception):
    """Base class for all mixphase failures."""

    code = "MIXPHASE_ERROR"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        """Convert error to payload dictionary."""
        error = {"code": self.code, "message": self.message}
        if self.details:
            error["details"] = self.details
        return error


class ContractError(MixphaseError, ValueError):
    """Input violates an operation's documented contract."""

    code = "CONTRACT_VIOLATION"


class DimensionError(ContractError):
    """Matrix or vector dimensions are inconsistent."""

    code = "DIMENSION_MISMATCH"


class PreconditionError(ContractError):
    """Path has degenerate blocks the chosen functional cannot handle."""

    code = "DEGENERATE_BLOCK"


class DomainError(ContractError):
    """Parameters are outside the domain of a closed-form expression."""

    code = "DOMAIN_ERROR"


class SingularityError(MixphaseError):
    """Overlap block is numerically singular; the time grid is too coarse."""

    code = "GRID_TOO_COARSE"


class AmbiguityError(MixphaseError):
    """Branch assignment between consecutive samples is not unique."""

    code = "AMBIGUOUS_BRANCHES"


class UndefinedPhaseError(MixphaseError):
    """Weighted overlap sum vanishes, so its argument is meaningless."""

    code = "UNDEFINED_PHASE"


class IntegrationAccuracyError(MixphaseError):
    """Trace drifted beyond tolerance during integration."""

    code = "TRACE_DRIFT"


class PositivityError(MixphaseError):
    """Integrated state acquired a negative eigenvalue."""

    code = "NEGATIVE_EIGENVALUE"
