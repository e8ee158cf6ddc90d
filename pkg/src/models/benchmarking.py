"""
Benchmarking and calibration-experiment records
"""

from typing import List

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.errors import DomainError, FitFailureError, InvalidStateError
from src.models.states import _num_qubits_for

# Slack on A + B, in units of the fit residual RMS.
INTERCEPT_RMS_SLACK = 5.0


class DecayCurve(BaseModel):
    """Survival probability of the initial state against the number of Cliffords."""

    model_config = ConfigDict(frozen=True)

    n_cliffords: List[int]
    survival: List[float]

    @model_validator(mode="after")
    def _check_points(self) -> "DecayCurve":
        if len(self.n_cliffords) != len(self.survival):
            raise DomainError("n_cliffords and survival differ in length")
        if len(self.n_cliffords) < 4:
            raise DomainError(f"A decay fit needs at least 4 points, got {len(self.n_cliffords)}")
        if any(b <= a for a, b in zip(self.n_cliffords, self.n_cliffords[1:])):
            raise DomainError("n_cliffords must be strictly increasing")
        if any(not 0.0 <= s <= 1.0 for s in self.survival):
            raise DomainError("Survival probabilities must lie in [0, 1]")
        return self


class DecayFit(BaseModel):
    """Parameters of F(N) = A·p^N + B and the RMS of the fit residuals."""

    model_config = ConfigDict(frozen=True)

    a: float
    p: float
    b: float
    residual_rms: float = Field(ge=0.0)

    @model_validator(mode="after")
    def _check_physical(self) -> "DecayFit":
        if not 0.0 < self.p <= 1.0:
            raise FitFailureError(f"Fitted decay p = {self.p:.6f} lies outside (0, 1]")
        slack = INTERCEPT_RMS_SLACK * self.residual_rms
        if not -slack <= self.a + self.b <= 1.0 + 1e-6 + slack:
            raise FitFailureError(f"Fitted A + B = {self.a + self.b:.6f} lies outside [0, 1]")
        return self


class InitializationCounts(BaseModel):
    """
    Readout counts of the initialization experiment.

    Row i holds the outcome counts observed after preparing basis state i.
    """

    model_config = ConfigDict(frozen=True)

    counts: List[List[int]]
    n_shot: int = Field(ge=1)

    @model_validator(mode="after")
    def _check_rows(self) -> "InitializationCounts":
        d = len(self.counts)
        _num_qubits_for(d)
        for i, row in enumerate(self.counts):
            if len(row) != d:
                raise InvalidStateError(f"Counts row {i} has {len(row)} entries, expected {d}")
            if any(c < 0 for c in row):
                raise InvalidStateError(f"Counts row {i} has negative entries")
            if sum(row) != self.n_shot:
                raise InvalidStateError(f"Counts row {i} sums to {sum(row)}, expected {self.n_shot}")
        return self

    @property
    def num_qubits(self) -> int:
        return _num_qubits_for(len(self.counts))
