"""
Exception hierarchy for the simulator library layer.

Services catch these and turn them into error dicts; the library itself always raises.
"""

from typing import Any, Dict, Optional


class MagicSimError(Exception):
    """Base class for every error raised by the library layer."""


class InvalidStateError(MagicSimError):
    """A density matrix or probability vector violates its invariants."""


class InvalidSubsystemError(MagicSimError):
    """A qubit subset is empty, full, or out of range."""


class UnsupportedGateError(MagicSimError):
    """Unknown gate kind or malformed gate arguments."""


class DomainError(MagicSimError):
    """Argument outside the documented range."""


class DimensionMismatchError(MagicSimError):
    """Operand shapes do not agree."""


class OutOfModelError(MagicSimError):
    """Measured value is not attainable under the assumed noise model."""


class InconsistencyError(MagicSimError):
    """Derived quantities contradict each other (e.g. non-local part above total)."""


class UndersampledDataError(MagicSimError):
    """Estimator mean is non-positive, so its logarithm is undefined."""


class NumericalError(MagicSimError):
    """An iterative solver stopped without converging."""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class UnidentifiableFitError(MagicSimError):
    """Decay data carry no information about the decay rate."""


class FitFailureError(MagicSimError):
    """Fitted parameters fall outside the physical region."""


class ScenarioError(MagicSimError):
    """Scenario file is malformed or references unknown entities."""
