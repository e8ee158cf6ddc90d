"""
Noise channels and measurement effects: global depolarizing, readout corruption, finite shots
"""

import logging
from functools import reduce
from typing import Sequence, Tuple

import numpy as np

from src.errors import DimensionMismatchError, DomainError
from src.models.states import CalibrationMatrix, DensityMatrix, ProbabilityVector

logger = logging.getLogger(__name__)

MAX_READOUT_EPS = 0.5
MAX_READOUT_CORRELATION = 0.1


def _check_survival(p_dep: float) -> None:
    if not 0.0 <= p_dep <= 1.0:
        raise DomainError(f"Depolarizing survival probability must lie in [0, 1], got {p_dep}")


def depolarize_matrix(rho: np.ndarray, p_dep: float) -> np.ndarray:
    """p·ρ + (1 − p)·I/d on a raw matrix."""
    _check_survival(p_dep)
    d = rho.shape[0]
    return p_dep * rho + (1.0 - p_dep) * np.eye(d, dtype=complex) / d


def depolarize(rho: DensityMatrix, p_dep: float) -> DensityMatrix:
    """Global depolarizing channel on the full register; p_dep is the survival probability."""
    return DensityMatrix.from_array(depolarize_matrix(rho.matrix, p_dep))


def error_probability(p_dep: float) -> float:
    """Convert a survival probability into the error probability p = 1 − p_dep."""
    _check_survival(p_dep)
    return 1.0 - p_dep


def survival_for_purity(target_purity: float, d: int, n_cz: int = 1) -> float:
    """
    Per-CZ survival probability that takes a pure d-dimensional state to the
    target purity after n_cz global depolarizing applications.

    Uses Tr(ρ²) = p² + (1 − p²)/d for the accumulated survival p = p_cz^n_cz.
    """
    if not 1.0 / d <= target_purity <= 1.0:
        raise DomainError(f"Purity {target_purity} unreachable for dimension {d}")
    if n_cz < 1:
        raise DomainError(f"Need at least one CZ to calibrate, got {n_cz}")
    p_total = np.sqrt((d * target_purity - 1.0) / (d - 1.0))
    return float(p_total ** (1.0 / n_cz))


def apply_readout_array(probs: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """Λ·p for a single vector or row-wise for a (n, d) batch."""
    if probs.shape[-1] != lam.shape[1]:
        raise DimensionMismatchError(
            f"Probability length {probs.shape[-1]} does not match calibration size {lam.shape[1]}"
        )
    return np.einsum("...j,ij->...i", probs, lam)


def apply_readout_noise(p: ProbabilityVector, lam: CalibrationMatrix) -> ProbabilityVector:
    """p_exp = Λ · p_ideal."""
    return ProbabilityVector(probs=apply_readout_array(p.probs, lam.matrix))


def sample_shot_frequencies(probs: np.ndarray, n_shot: int, rng: np.random.Generator) -> np.ndarray:
    """Empirical frequencies of n_shot multinomial draws."""
    counts = rng.multinomial(n_shot, probs / probs.sum())
    return counts / n_shot


def sample_shots(p: ProbabilityVector, n_shot: int, seed: int) -> ProbabilityVector:
    """Finite-shot estimate of p; deterministic for a fixed seed."""
    if n_shot < 1:
        raise DomainError(f"n_shot must be positive, got {n_shot}")
    rng = np.random.default_rng(seed)
    return ProbabilityVector(probs=sample_shot_frequencies(p.probs, n_shot, rng))


def synth_calibration_matrix(
    per_qubit_eps: Sequence[Tuple[float, float]],
    correlation: float = 0.0,
) -> CalibrationMatrix:
    """
    Readout matrix from per-qubit flip probabilities (ε01, ε10).

    ε01 is P(read 1 | prepared 0). The uncorrelated part is the Kronecker product of
    single-qubit matrices; a nonzero correlation adds weight on the all-bits-flipped
    outcome of every column (registers of two or more qubits) before re-normalizing.
    """
    if not per_qubit_eps:
        raise DomainError("Need flip probabilities for at least one qubit")
    for eps01, eps10 in per_qubit_eps:
        if not (0.0 <= eps01 <= MAX_READOUT_EPS and 0.0 <= eps10 <= MAX_READOUT_EPS):
            raise DomainError(f"Readout flip probabilities must lie in [0, 0.5], got ({eps01}, {eps10})")
    if not 0.0 <= correlation <= MAX_READOUT_CORRELATION:
        raise DomainError(f"Correlation must lie in [0, 0.1], got {correlation}")

    singles = [np.array([[1.0 - e01, e10], [e01, 1.0 - e10]]) for e01, e10 in per_qubit_eps]
    lam = reduce(np.kron, singles)
    if correlation > 0.0 and len(per_qubit_eps) > 1:
        d = lam.shape[0]
        mask = d - 1
        for column in range(d):
            lam[column ^ mask, column] += correlation
        lam = lam / lam.sum(axis=0, keepdims=True)
    return CalibrationMatrix(matrix=lam)
