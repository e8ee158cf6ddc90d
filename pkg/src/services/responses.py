"""
Error-dict builders shared by the services
"""

from typing import Any, Dict

from pydantic import ValidationError

from src.config import ERROR_COMPUTATION, ERROR_INVALID_SCENARIO, ERROR_UNEXPECTED, ERROR_UNKNOWN_STATE
from src.errors import MagicSimError, NumericalError
from src.models.circuit import StateId


def error_response(message: str) -> Dict[str, Any]:
    return {"error": True, "message": message}


def computation_error(exc: MagicSimError) -> Dict[str, Any]:
    """Error dict naming the library error kind; solver diagnostics are passed along."""
    response = error_response(ERROR_COMPUTATION.format(kind=type(exc).__name__, detail=str(exc)))
    if isinstance(exc, NumericalError) and exc.diagnostics:
        response["diagnostics"] = exc.diagnostics
    return response


def validation_error(exc: ValidationError) -> Dict[str, Any]:
    return error_response(ERROR_INVALID_SCENARIO.format(detail=str(exc)))


def unexpected_error(exc: Exception) -> Dict[str, Any]:
    return error_response(ERROR_UNEXPECTED.format(detail=str(exc)))


def check_state_id(state: str):
    """
    Resolve a state name.

    Returns:
        Tuple of (state_id, error_dict)
    """
    try:
        return StateId(state), None
    except ValueError:
        available = ", ".join(s.value for s in StateId)
        return None, error_response(ERROR_UNKNOWN_STATE.format(state=state, available=available))
