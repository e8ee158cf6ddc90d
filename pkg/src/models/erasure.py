"""
Local-magic erasure records
"""

import csv
import io
import math
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.config import ERASURE_MAX_EVALUATIONS, ERASURE_RESTARTS, ERASURE_TOL
from src.errors import DimensionMismatchError

TWO_PI = 2.0 * math.pi

ANGLE_NAMES = ("alpha", "beta", "gamma", "delta", "eta", "phi")


def wrap_angle(value: float) -> float:
    """Map an angle into [0, 2π)."""
    wrapped = math.fmod(value, TWO_PI)
    if wrapped < 0.0:
        wrapped += TWO_PI
    return 0.0 if wrapped >= TWO_PI else wrapped


class ErasureAngles(BaseModel):
    """
    Euler angles of U_A = Rz(α)Ry(β)Rz(γ) on qubit 0 and U_B = Rz(δ)Ry(η)Rz(φ) on qubit 1.

    Radians, wrapped to [0, 2π).
    """

    model_config = ConfigDict(frozen=True)

    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0
    delta: float = 0.0
    eta: float = 0.0
    phi: float = 0.0

    @field_validator(*ANGLE_NAMES, mode="before")
    @classmethod
    def _wrap(cls, value: float) -> float:
        return wrap_angle(float(value))

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in ANGLE_NAMES])

    @classmethod
    def from_array(cls, values) -> "ErasureAngles":
        values = np.asarray(values, dtype=float).reshape(-1)
        if values.size != len(ANGLE_NAMES):
            raise DimensionMismatchError(f"Expected {len(ANGLE_NAMES)} angles, got {values.size}")
        return cls(**dict(zip(ANGLE_NAMES, values.tolist())))

    def to_degrees(self) -> dict:
        return {name: math.degrees(getattr(self, name)) for name in ANGLE_NAMES}


class OptConfig(BaseModel):
    """
    Erasure optimizer settings.

    real_amplitude=None detects real-amplitude inputs from the density matrix.
    """

    model_config = ConfigDict(frozen=True)

    tol: float = Field(default=ERASURE_TOL, gt=0.0)
    max_evaluations: int = Field(default=ERASURE_MAX_EVALUATIONS, ge=1)
    restarts: int = Field(default=ERASURE_RESTARTS, ge=0)
    seed: int = Field(default=0, ge=0)
    real_amplitude: Optional[bool] = None


class Landscape(BaseModel):
    """Residual M₂ over an Rz(γ) ⊗ Rz(φ) grid; values[i][j] belongs to (gamma[i], phi[j])."""

    model_config = ConfigDict(frozen=True)

    gamma: List[float]
    phi: List[float]
    values: List[List[float]]

    @model_validator(mode="after")
    def _check_shape(self) -> "Landscape":
        if len(self.values) != len(self.gamma) or any(len(row) != len(self.phi) for row in self.values):
            raise DimensionMismatchError("Landscape values do not match the grid")
        return self

    def minimum(self) -> Tuple[float, float, float]:
        """(γ, φ, value) of the smallest grid value; first occurrence in row-major order."""
        values = np.asarray(self.values)
        i, j = np.unravel_index(int(np.argmin(values)), values.shape)
        return self.gamma[i], self.phi[j], float(values[i, j])


class ErasureResult(BaseModel):
    """Best local rotation found and the magic left after applying it."""

    model_config = ConfigDict(frozen=True)

    angles: ErasureAngles
    residual_m2: float
    evaluations: int = Field(ge=0)
    converged: bool = True
    landscape: Optional[Landscape] = None

    def to_csv(self) -> str:
        """gamma_deg,phi_deg,m2 rows of the landscape (empty when none was computed)."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["gamma_deg", "phi_deg", "m2"])
        if self.landscape is not None:
            for g, row in zip(self.landscape.gamma, self.landscape.values):
                for p, value in zip(self.landscape.phi, row):
                    writer.writerow([f"{math.degrees(g):.6f}", f"{math.degrees(p):.6f}", f"{value:.12f}"])
        return buffer.getvalue()
