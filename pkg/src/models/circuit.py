"""
Gate and circuit records
"""

from enum import Enum
from typing import List, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.errors import UnsupportedGateError


class GateKind(str, Enum):
    RX = "Rx"
    RY = "Ry"
    RZ = "Rz"
    RXY = "Rxy"
    H = "H"
    S = "S"
    T = "T"
    X = "X"
    Y = "Y"
    Z = "Z"
    CZ = "CZ"
    CNOT = "CNOT"


TWO_QUBIT_KINDS = {GateKind.CZ, GateKind.CNOT}

ANGLE_ARITY = {
    GateKind.RX: 1,
    GateKind.RY: 1,
    GateKind.RZ: 1,
    GateKind.RXY: 2,
}


class StateId(str, Enum):
    """Named preparation circuits."""

    PSI0 = "Psi0"
    PSI1 = "Psi1"
    PSI2 = "Psi2"
    PSI3 = "Psi3"
    PSI4 = "Psi4"
    LM = "LM"
    LM_ERASED = "LM_erased"
    M = "M"
    M_ERASED = "M_erased"
    NLM = "NLM"
    FIG4 = "Fig4"


class GateSpec(BaseModel):
    """
    One gate application.

    For CNOT the qubits are (control, target). Angles are radians; Rxy takes (θ, φ).
    """

    model_config = ConfigDict(frozen=True)

    kind: GateKind
    qubits: Tuple[int, ...]
    angles: Tuple[float, ...] = ()

    @model_validator(mode="after")
    def _check_arity(self) -> "GateSpec":
        expected_qubits = 2 if self.kind in TWO_QUBIT_KINDS else 1
        if len(self.qubits) != expected_qubits:
            raise UnsupportedGateError(
                f"{self.kind.value} acts on {expected_qubits} qubit(s), got {list(self.qubits)}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise UnsupportedGateError(f"{self.kind.value} needs distinct qubits, got {list(self.qubits)}")
        if any(q < 0 for q in self.qubits):
            raise UnsupportedGateError(f"Negative qubit index in {list(self.qubits)}")
        expected_angles = ANGLE_ARITY.get(self.kind, 0)
        if len(self.angles) != expected_angles:
            raise UnsupportedGateError(
                f"{self.kind.value} takes {expected_angles} angle(s), got {len(self.angles)}"
            )
        return self


class Circuit(BaseModel):
    """Ordered gate list over a fixed register, starting from |0...0⟩."""

    model_config = ConfigDict(frozen=True)

    num_qubits: int = Field(ge=1)
    gates: List[GateSpec] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_indices(self) -> "Circuit":
        for gate in self.gates:
            if max(gate.qubits) >= self.num_qubits:
                raise UnsupportedGateError(
                    f"{gate.kind.value} on qubits {list(gate.qubits)} exceeds register of {self.num_qubits}"
                )
        return self

    def then(self, *gates: GateSpec) -> "Circuit":
        """Return a new circuit with gates appended."""
        return Circuit(num_qubits=self.num_qubits, gates=[*self.gates, *gates])

    def count_cz(self) -> int:
        return sum(1 for gate in self.gates if gate.kind in TWO_QUBIT_KINDS)
