"""Error codes, payload formatting and exit statuses for the mixphase CLI."""

from typing import Any, Dict, Optional

from pydantic import ValidationError

from ..numkernel.errors import MixphaseError

EXIT_SUCCESS = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


class ConfigError(MixphaseError):
    """Scenario or settings document is invalid."""

    code = "INVALID_CONFIG"


# Error code definitions
ERROR_CODES = {
    'INVALID_CONFIG': {
        'message': 'Scenario configuration is invalid',
        'exit': EXIT_CONFIG,
    },
    'FILE_NOT_FOUND': {
        'message': 'Referenced file does not exist',
        'exit': EXIT_CONFIG,
    },
    'CONTRACT_VIOLATION': {
        'message': 'Input violates an operation contract',
        'exit': EXIT_NUMERICAL,
    },
    'DIMENSION_MISMATCH': {
        'message': 'Operator dimensions are inconsistent',
        'exit': EXIT_NUMERICAL,
    },
    'DEGENERATE_BLOCK': {
        'message': 'Degenerate eigenvalue block requires the holonomy functional',
        'exit': EXIT_NUMERICAL,
    },
    'DOMAIN_ERROR': {
        'message': 'Parameter outside the domain of the formula',
        'exit': EXIT_NUMERICAL,
    },
    'GRID_TOO_COARSE': {
        'message': 'Overlap matrix is singular; refine the time grid',
        'exit': EXIT_NUMERICAL,
    },
    'AMBIGUOUS_BRANCHES': {
        'message': 'Eigenbranch matching is ambiguous; refine the time grid',
        'exit': EXIT_NUMERICAL,
    },
    'UNDEFINED_PHASE': {
        'message': 'Weighted overlap vanishes; phase is undefined',
        'exit': EXIT_NUMERICAL,
    },
    'TRACE_DRIFT': {
        'message': 'Integrator trace drift exceeds tolerance; increase steps',
        'exit': EXIT_NUMERICAL,
    },
    'NEGATIVE_EIGENVALUE': {
        'message': 'Integrated state lost positivity; increase steps',
        'exit': EXIT_NUMERICAL,
    },
    'INTERNAL_ERROR': {
        'message': 'Unexpected internal error',
        'exit': EXIT_UNEXPECTED,
    },
}


def error_payload(code: str, message: str, details: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Create standard error payload.

    Args:
        code: Error code (e.g., 'UNDEFINED_PHASE')
        message: Human-readable error message
        details: Optional additional details

    Returns:
        Dictionary with success flag and error body
    """
    payload = {
        'success': False,
        'error': {
            'code': code,
            'message': message,
        },
    }
    if details:
        payload['error']['details'] = details
    return payload


def validation_details(error: ValidationError) -> Dict[str, str]:
    """Field-level messages from a pydantic ValidationError."""
    details = {}
    for item in error.errors():
        field = ".".join(str(part) for part in item.get("loc", ())) or "config"
        details[field] = item.get("msg", "invalid value")
    return details


def payload_for(error: BaseException) -> Dict[str, Any]:
    """Map any exception raised by a run to an error payload."""
    if isinstance(error, ValidationError):
        return error_payload('INVALID_CONFIG', ERROR_CODES['INVALID_CONFIG']['message'], validation_details(error))
    if isinstance(error, FileNotFoundError):
        return error_payload('FILE_NOT_FOUND', str(error), {'path': str(error.filename)})
    if isinstance(error, MixphaseError):
        return error_payload(error.code, error.message, error.details)
    return error_payload('INTERNAL_ERROR', str(error) or ERROR_CODES['INTERNAL_ERROR']['message'])


def exit_code_for(error: BaseException) -> int:
    """Exit status for an exception: 2 config, 3 numerical, 1 anything else."""
    code = payload_for(error)['error']['code']
    if code in ERROR_CODES:
        return ERROR_CODES[code]['exit']
    if isinstance(error, MixphaseError):
        return EXIT_NUMERICAL
    return EXIT_UNEXPECTED
