"""
Noise configuration record
"""

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.models.states import CalibrationMatrix


class NoiseConfig(BaseModel):
    """
    Noise applied by the simulated pipeline.

    p_dep_cz is the survival probability of the global depolarizing channel that
    follows every CZ; 1.0 means noiseless.
    """

    model_config = ConfigDict(frozen=True)

    p_dep_cz: float = Field(default=1.0, ge=0.0, le=1.0)
    readout_lambda: Optional[CalibrationMatrix] = None
    n_shot: Optional[int] = Field(default=None, ge=1)
    seed: int = Field(default=0, ge=0)

    @field_validator("readout_lambda", mode="before")
    @classmethod
    def _accept_nested_lists(cls, value):
        if isinstance(value, (list, tuple)):
            return CalibrationMatrix.from_json_list(value)
        return value

    @classmethod
    def noiseless(cls) -> "NoiseConfig":
        return cls()
