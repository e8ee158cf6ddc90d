"""
Statistical estimate, dataset and magic summary records
"""

import math
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.config import PROB_SUM_TOL, STRUCTURAL_TOL
from src.errors import InconsistencyError, InvalidStateError


class EstimateWithError(BaseModel):
    """Sample mean with spread and sampling error (std / sqrt(n))."""

    model_config = ConfigDict(frozen=True)

    mean: float
    sample_std: float = Field(ge=0.0)
    sampling_error: float = Field(ge=0.0)
    n_samples: int = Field(ge=1)

    @classmethod
    def from_samples(cls, values: np.ndarray) -> "EstimateWithError":
        values = np.asarray(values, dtype=float)
        n = values.size
        std = float(np.std(values, ddof=1)) if n > 1 else 0.0
        return cls(
            mean=float(np.mean(values)),
            sample_std=std,
            sampling_error=std / math.sqrt(n),
            n_samples=n,
        )

    @classmethod
    def from_sampling_error(cls, mean: float, sampling_error: float, n_samples: int) -> "EstimateWithError":
        """Build an estimate whose error was obtained by propagation."""
        return cls(
            mean=mean,
            sample_std=sampling_error * math.sqrt(n_samples),
            sampling_error=sampling_error,
            n_samples=n_samples,
        )


class RcmDataset(BaseModel):
    """
    Outcome distributions of one Randomized Clifford Measurement run.

    clifford_ids[k] holds the canonical single-qubit Clifford id applied to each
    qubit for sample k; prob_vectors[k] is the measured (or exact) distribution.
    """

    model_config = ConfigDict(frozen=True)

    num_qubits: int = Field(ge=1)
    clifford_ids: List[Tuple[int, ...]]
    prob_vectors: List[List[float]]
    n_shot: Optional[int] = Field(default=None, ge=1)
    seed: int = 0
    mitigated: bool = False

    @model_validator(mode="after")
    def _check_samples(self) -> "RcmDataset":
        if len(self.clifford_ids) < 2:
            raise InvalidStateError("An RCM dataset needs at least two Clifford samples")
        if len(self.clifford_ids) != len(self.prob_vectors):
            raise InvalidStateError("clifford_ids and prob_vectors differ in length")
        d = 2 ** self.num_qubits
        probs = np.asarray(self.prob_vectors, dtype=float)
        if probs.shape != (len(self.prob_vectors), d):
            raise InvalidStateError(f"Probability vectors must have length {d}")
        if probs.min() < 0.0 or np.max(np.abs(probs.sum(axis=1) - 1.0)) > PROB_SUM_TOL:
            raise InvalidStateError("Every probability vector must lie on the simplex")
        if any(len(ids) != self.num_qubits for ids in self.clifford_ids):
            raise InvalidStateError("Every Clifford tuple needs one id per qubit")
        return self

    @property
    def n_samples(self) -> int:
        return len(self.prob_vectors)

    def probabilities(self) -> np.ndarray:
        """(n_samples, 2^N) array of outcome probabilities."""
        return np.asarray(self.prob_vectors, dtype=float)

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    @classmethod
    def from_json(cls, text: str) -> "RcmDataset":
        return cls.model_validate_json(text)


class SchmidtSpectrum(BaseModel):
    """Larger Schmidt weight λ ∈ [0.5, 1] and the angle θ with λ = cos²(θ/2)."""

    model_config = ConfigDict(frozen=True)

    lam: float = Field(ge=0.5 - STRUCTURAL_TOL, le=1.0 + STRUCTURAL_TOL)
    theta: float

    @classmethod
    def from_lambda(cls, lam: float) -> "SchmidtSpectrum":
        lam = min(max(lam, 1.0 - lam), 1.0)
        return cls(lam=lam, theta=2.0 * math.acos(math.sqrt(lam)))


class MagicReport(BaseModel):
    """Exact magic summary of one state; m2 values are in bits."""

    model_config = ConfigDict(frozen=True)

    purity: float
    stabilizer_purity: float = Field(gt=0.0, le=1.0 + STRUCTURAL_TOL)
    m2: float
    m2_nonlocal: Optional[float] = None
    m2_local: Optional[float] = None

    @model_validator(mode="after")
    def _check_split(self) -> "MagicReport":
        if self.m2 < -1e-10:
            raise InconsistencyError(f"Negative stabilizer entropy {self.m2}")
        if self.m2_local is not None and self.m2_nonlocal is not None:
            if abs(self.m2_local - (self.m2 - self.m2_nonlocal)) > STRUCTURAL_TOL:
                raise InconsistencyError("Local and non-local magic do not add up to the total")
        return self
