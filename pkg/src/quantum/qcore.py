"""
Dense linear algebra for registers of up to a few qubits
"""

import itertools
from functools import lru_cache, reduce
from typing import Iterable, List, Sequence

import numpy as np

from src.errors import DimensionMismatchError, InvalidSubsystemError
from src.models.states import PAULI_LETTERS, DensityMatrix, PauliString, ProbabilityVector


def tensor(*operands: np.ndarray) -> np.ndarray:
    """
    Kronecker product with qubit 0 as the leftmost factor.

    tensor(Z, I) = diag(1, 1, -1, -1).
    """
    if not operands:
        raise DimensionMismatchError("tensor() needs at least one operand")
    return reduce(np.kron, (np.asarray(op, dtype=complex) for op in operands))


def check_subsystem(keep: Iterable[int], num_qubits: int) -> List[int]:
    kept = sorted(set(keep))
    if not kept or len(kept) >= num_qubits:
        raise InvalidSubsystemError(
            f"Subsystem {kept} must be a nonempty proper subset of {list(range(num_qubits))}"
        )
    if kept[0] < 0 or kept[-1] >= num_qubits:
        raise InvalidSubsystemError(f"Subsystem {kept} out of range for {num_qubits} qubits")
    return kept


def embed_operator(op: np.ndarray, qubits: Sequence[int], num_qubits: int) -> np.ndarray:
    """Place a k-qubit operator on the listed qubits (in that order) of an N-qubit register."""
    k = len(qubits)
    if op.shape != (2 ** k, 2 ** k):
        raise DimensionMismatchError(f"Operator shape {op.shape} does not act on {k} qubit(s)")
    order = list(qubits) + [q for q in range(num_qubits) if q not in qubits]
    full = np.kron(op, np.eye(2 ** (num_qubits - k), dtype=complex))
    perm = list(np.argsort(order))
    d = 2 ** num_qubits
    return (
        full.reshape([2] * (2 * num_qubits))
        .transpose(perm + [num_qubits + p for p in perm])
        .reshape(d, d)
    )


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced state on the kept qubits (kept in ascending order)."""
    n = rho.num_qubits
    kept = check_subsystem(keep, n)
    traced = [q for q in range(n) if q not in kept]
    order = kept + traced
    dk, dt = 2 ** len(kept), 2 ** len(traced)
    blocks = (
        rho.matrix.reshape([2] * (2 * n))
        .transpose(order + [n + q for q in order])
        .reshape(dk, dt, dk, dt)
    )
    return DensityMatrix.from_array(np.einsum("ajbj->ab", blocks))


def purity(rho: DensityMatrix) -> float:
    """Tr(ρ²)."""
    return float(np.real(np.einsum("ij,ji->", rho.matrix, rho.matrix)))


def pauli_strings(num_qubits: int) -> List[PauliString]:
    """All 4^N Pauli strings in lexicographic (I, X, Y, Z) order."""
    return [PauliString(letters="".join(p)) for p in itertools.product(PAULI_LETTERS, repeat=num_qubits)]


@lru_cache(maxsize=None)
def pauli_stack(num_qubits: int) -> np.ndarray:
    """(4^N, d, d) array of Pauli matrices in pauli_strings order."""
    stack = np.array([p.matrix() for p in pauli_strings(num_qubits)])
    stack.setflags(write=False)
    return stack


def pauli_expectations_array(matrices: np.ndarray, num_qubits: int) -> np.ndarray:
    """Tr(Pρ) for a single operator (d, d) or a batch (n, d, d)."""
    stack = pauli_stack(num_qubits)
    if matrices.ndim == 2:
        return np.real(np.einsum("pij,ji->p", stack, matrices))
    return np.real(np.einsum("pij,nji->np", stack, matrices))


def pauli_expectations(rho: DensityMatrix) -> np.ndarray:
    """4^N real values Tr(Pρ) in pauli_strings order."""
    return pauli_expectations_array(rho.matrix, rho.num_qubits)


def born_probabilities(rho: DensityMatrix) -> ProbabilityVector:
    """Computational-basis outcome distribution diag(ρ)."""
    return ProbabilityVector(probs=np.real(np.diag(rho.matrix)))


def dominant_statevector(rho: DensityMatrix) -> np.ndarray:
    """Eigenvector of the largest eigenvalue."""
    _, vectors = np.linalg.eigh(rho.matrix)
    return vectors[:, -1]
