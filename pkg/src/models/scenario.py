"""
Scenario file schema (angles in degrees, converted to radians on use)
"""

import math
from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.config import DEFAULT_N_RAND, DEFAULT_N_SHOT, SCENARIO_SCHEMA_VERSION
from src.errors import ScenarioError
from src.models.circuit import Circuit, GateKind, GateSpec, StateId


def params_to_radians(params_deg: Optional[Dict[str, float]]) -> Dict[str, float]:
    """Degrees to radians for state parameters; the T-gate switch `t` is passed through unchanged."""
    return {k: (v if k == "t" else math.radians(v)) for k, v in (params_deg or {}).items()}


class EstimatorKind(str, Enum):
    PURITY = "purity"
    STAB_PURITY = "stab_purity"
    SRE = "sre"
    RDM_PURITY = "rdm_purity"
    RENYI2 = "renyi2"


class EstimatorSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: EstimatorKind
    keep: Optional[List[int]] = None

    @model_validator(mode="after")
    def _check_keep(self) -> "EstimatorSpec":
        if self.kind == EstimatorKind.RDM_PURITY and not self.keep:
            raise ScenarioError("rdm_purity estimator needs a non-empty 'keep' list")
        return self


class MitigationSpec(BaseModel):
    """
    Readout mitigation switch.

    With calibration_shots set, Λ is re-estimated from a simulated initialization
    experiment instead of using the true readout matrix.
    """

    model_config = ConfigDict(frozen=True)

    enabled: bool = False
    calibration_shots: Optional[int] = Field(default=None, ge=1)


class ScenarioNoise(BaseModel):
    model_config = ConfigDict(frozen=True)

    p_dep_cz: float = Field(default=1.0, gt=0.0, le=1.0)
    readout_eps: Optional[List[Tuple[float, float]]] = None
    readout_correlation: float = Field(default=0.0, ge=0.0)
    readout_lambda: Optional[List[List[float]]] = None

    @model_validator(mode="after")
    def _one_readout_source(self) -> "ScenarioNoise":
        if self.readout_eps is not None and self.readout_lambda is not None:
            raise ScenarioError("Give either readout_eps or readout_lambda, not both")
        return self


class ScenarioGate(BaseModel):
    """Gate as written in a scenario file; angles in degrees."""

    model_config = ConfigDict(frozen=True)

    kind: GateKind
    qubits: List[int]
    angles_deg: List[float] = Field(default_factory=list)

    def to_gate(self) -> GateSpec:
        return GateSpec(
            kind=self.kind,
            qubits=tuple(self.qubits),
            angles=tuple(math.radians(a) for a in self.angles_deg),
        )


class ScenarioCircuit(BaseModel):
    model_config = ConfigDict(frozen=True)

    num_qubits: int = Field(ge=1)
    gates: List[ScenarioGate] = Field(default_factory=list)

    def to_circuit(self) -> Circuit:
        return Circuit(num_qubits=self.num_qubits, gates=[g.to_gate() for g in self.gates])


class Scenario(BaseModel):
    """One simulated RCM experiment: preparation, noise, estimators and sampling settings."""

    model_config = ConfigDict(frozen=True)

    schema_version: int = SCENARIO_SCHEMA_VERSION
    name: str
    state: Optional[StateId] = None
    params_deg: Dict[str, float] = Field(default_factory=dict)
    circuit: Optional[ScenarioCircuit] = None
    noise: ScenarioNoise = Field(default_factory=ScenarioNoise)
    estimators: List[EstimatorSpec] = Field(min_length=1)
    mitigation: MitigationSpec = Field(default_factory=MitigationSpec)
    n_rand: int = Field(default=DEFAULT_N_RAND, ge=2)
    n_shot: Optional[int] = Field(default=DEFAULT_N_SHOT, ge=1)
    seed: int = Field(default=0, ge=0)
    exhaustive: bool = False
    workers: int = Field(default=1, ge=1)

    @field_validator("schema_version")
    @classmethod
    def _check_version(cls, value: int) -> int:
        if value != SCENARIO_SCHEMA_VERSION:
            raise ScenarioError(
                f"Unsupported scenario schema version {value} (expected {SCENARIO_SCHEMA_VERSION})"
            )
        return value

    @model_validator(mode="after")
    def _one_preparation(self) -> "Scenario":
        if (self.state is None) == (self.circuit is None):
            raise ScenarioError("Scenario needs exactly one of 'state' or 'circuit'")
        return self

    def params_radians(self) -> Dict[str, float]:
        return params_to_radians(self.params_deg)
