"""
State, operator and probability records shared by every simulator layer
"""

from functools import reduce
from typing import List, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, field_serializer, field_validator, model_validator

from src.config import (
    CALIBRATION_COLUMN_TOL,
    EIGENVALUE_FLOOR,
    PROB_CLAMP_TOL,
    PROB_SUM_TOL,
    STRUCTURAL_TOL,
)
from src.errors import DimensionMismatchError, InvalidStateError

PAULI_LETTERS = "IXYZ"

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _num_qubits_for(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 2 or (1 << n) != dim:
        raise DimensionMismatchError(f"Dimension {dim} is not a power of two")
    return n


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


class DensityMatrix(BaseModel):
    """
    Hermitian, unit-trace, positive semidefinite operator on N qubits.

    Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of
    computational-basis indices.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    matrix: np.ndarray

    @field_validator("matrix", mode="before")
    @classmethod
    def _coerce_matrix(cls, value):
        array = np.array(value, dtype=complex)
        if array.ndim != 2 or array.shape[0] != array.shape[1]:
            raise InvalidStateError(f"Density matrix must be square, got shape {array.shape}")
        _num_qubits_for(array.shape[0])
        return _frozen(array)

    @model_validator(mode="after")
    def _check_invariants(self) -> "DensityMatrix":
        rho = self.matrix
        if np.max(np.abs(rho - rho.conj().T)) > STRUCTURAL_TOL:
            raise InvalidStateError("Density matrix is not Hermitian")
        trace = np.trace(rho)
        if abs(trace - 1.0) > STRUCTURAL_TOL:
            raise InvalidStateError(f"Density matrix trace is {trace.real:.3e}, expected 1")
        smallest = np.linalg.eigvalsh(rho)[0]
        if smallest < EIGENVALUE_FLOOR:
            raise InvalidStateError(f"Density matrix has negative eigenvalue {smallest:.3e}")
        return self

    @field_serializer("matrix")
    def _serialize_matrix(self, matrix: np.ndarray) -> List[List[List[float]]]:
        return [[[float(z.real), float(z.imag)] for z in row] for row in matrix]

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def num_qubits(self) -> int:
        return _num_qubits_for(self.dim)

    @classmethod
    def from_statevector(cls, psi: Sequence[complex]) -> "DensityMatrix":
        """Build |ψ⟩⟨ψ| from a (not necessarily normalized) amplitude vector."""
        vec = np.asarray(psi, dtype=complex).reshape(-1)
        norm = np.linalg.norm(vec)
        if norm == 0:
            raise InvalidStateError("Zero state vector")
        vec = vec / norm
        return cls(matrix=np.outer(vec, vec.conj()))

    @classmethod
    def from_array(cls, matrix: np.ndarray) -> "DensityMatrix":
        """Wrap a numerically computed operator, removing round-off anti-Hermitian parts."""
        matrix = np.asarray(matrix, dtype=complex)
        return cls(matrix=(matrix + matrix.conj().T) / 2)

    @classmethod
    def maximally_mixed(cls, num_qubits: int) -> "DensityMatrix":
        d = 2 ** num_qubits
        return cls(matrix=np.eye(d, dtype=complex) / d)

    @classmethod
    def basis_state(cls, bits: str) -> "DensityMatrix":
        d = 2 ** len(bits)
        vec = np.zeros(d, dtype=complex)
        vec[int(bits, 2)] = 1.0
        return cls.from_statevector(vec)

    def tensor(self, other: "DensityMatrix") -> "DensityMatrix":
        return DensityMatrix.from_array(np.kron(self.matrix, other.matrix))

    def evolve(self, unitary: np.ndarray) -> "DensityMatrix":
        """Return U ρ U†."""
        if unitary.shape != self.matrix.shape:
            raise DimensionMismatchError(
                f"Unitary shape {unitary.shape} does not match state shape {self.matrix.shape}"
            )
        return DensityMatrix.from_array(unitary @ self.matrix @ unitary.conj().T)


class PauliString(BaseModel):
    """N-qubit Pauli string such as 'XZ' (qubit 0 first)."""

    model_config = ConfigDict(frozen=True)

    letters: str

    @field_validator("letters")
    @classmethod
    def _check_letters(cls, value: str) -> str:
        value = value.upper()
        if not value or any(ch not in PAULI_LETTERS for ch in value):
            raise ValueError(f"Pauli string must use letters from {PAULI_LETTERS}, got '{value}'")
        return value

    @property
    def num_qubits(self) -> int:
        return len(self.letters)

    def matrix(self) -> np.ndarray:
        return reduce(np.kron, (PAULI_MATRICES[ch] for ch in self.letters))


class ProbabilityVector(BaseModel):
    """Computational-basis outcome distribution over 2^N bitstrings."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    probs: np.ndarray

    @field_validator("probs", mode="before")
    @classmethod
    def _coerce_probs(cls, value):
        array = np.array(value, dtype=float).reshape(-1)
        _num_qubits_for(array.size)
        if array.min() < -PROB_CLAMP_TOL:
            raise InvalidStateError(f"Probability entry {array.min():.3e} is negative")
        total = array.sum()
        if abs(total - 1.0) > PROB_SUM_TOL:
            raise InvalidStateError(f"Probabilities sum to {total:.12f}, expected 1")
        array = np.clip(array, 0.0, None)
        return _frozen(array / array.sum())

    @field_serializer("probs")
    def _serialize_probs(self, probs: np.ndarray) -> List[float]:
        return [float(x) for x in probs]

    @property
    def num_qubits(self) -> int:
        return _num_qubits_for(self.probs.size)


class CalibrationMatrix(BaseModel):
    """
    Column-stochastic readout matrix: entry (i, j) is the probability of reading
    outcome i when basis state j was prepared.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    matrix: np.ndarray

    @field_validator("matrix", mode="before")
    @classmethod
    def _coerce_matrix(cls, value):
        array = np.array(value, dtype=float)
        if array.ndim != 2 or array.shape[0] != array.shape[1]:
            raise InvalidStateError(f"Calibration matrix must be square, got shape {array.shape}")
        _num_qubits_for(array.shape[0])
        if array.min() < -STRUCTURAL_TOL or array.max() > 1.0 + STRUCTURAL_TOL:
            raise InvalidStateError("Calibration matrix entries must lie in [0, 1]")
        column_sums = array.sum(axis=0)
        if np.max(np.abs(column_sums - 1.0)) > CALIBRATION_COLUMN_TOL:
            raise InvalidStateError(f"Calibration matrix columns sum to {column_sums.tolist()}")
        return _frozen(np.clip(array, 0.0, 1.0))

    @field_serializer("matrix")
    def _serialize_matrix(self, matrix: np.ndarray) -> List[List[float]]:
        return self.to_json_list()

    @property
    def num_qubits(self) -> int:
        return _num_qubits_for(self.matrix.shape[0])

    def to_json_list(self) -> List[List[float]]:
        """Row-major array of arrays."""
        return [[float(x) for x in row] for row in self.matrix]

    @classmethod
    def from_json_list(cls, rows: List[List[float]]) -> "CalibrationMatrix":
        return cls(matrix=rows)

    @classmethod
    def identity(cls, num_qubits: int) -> "CalibrationMatrix":
        return cls(matrix=np.eye(2 ** num_qubits))
