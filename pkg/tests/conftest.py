"""
Shared fixtures: seeded random states and a few named states
"""

import math

import numpy as np
import pytest

from src.models.circuit import StateId
from src.models.states import DensityMatrix
from src.quantum.circuits import prepare_state

T_PLUS_M2 = math.log2(4.0 / 3.0)


def random_pure_state(rng: np.random.Generator, num_qubits: int) -> DensityMatrix:
    d = 2 ** num_qubits
    return DensityMatrix.from_statevector(rng.normal(size=d) + 1j * rng.normal(size=d))


def random_mixed_state(rng: np.random.Generator, num_qubits: int) -> DensityMatrix:
    d = 2 ** num_qubits
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = g @ g.conj().T
    return DensityMatrix.from_array(rho / np.trace(rho))


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def t_plus() -> DensityMatrix:
    rho, _ = prepare_state(StateId.PSI1, {"t": 1})
    return rho


@pytest.fixture
def bell() -> DensityMatrix:
    rho, _ = prepare_state(StateId.PSI4)
    return rho


@pytest.fixture
def zero_state() -> DensityMatrix:
    return DensityMatrix.basis_state("0")
