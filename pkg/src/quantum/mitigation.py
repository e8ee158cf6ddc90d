"""
Readout calibration and simplex-constrained least-squares mitigation
"""

import logging
from typing import List, Tuple

import numpy as np

from src.config import MITIGATION_MAX_ITER, MITIGATION_TOL, POWER_ITERATION_STEPS
from src.errors import DimensionMismatchError, DomainError, NumericalError
from src.models.benchmarking import InitializationCounts
from src.models.states import CalibrationMatrix, ProbabilityVector

logger = logging.getLogger(__name__)


def calibration_from_counts(ic: InitializationCounts) -> CalibrationMatrix:
    """Λ_ij = counts[j][i] / n_shot; column j is preparation j."""
    counts = np.asarray(ic.counts, dtype=float)
    if np.any(counts.sum(axis=1) == 0):
        raise DomainError("Initialization counts contain an empty row")
    return CalibrationMatrix(matrix=counts.T / ic.n_shot)


def simulate_initialization_counts(lam: CalibrationMatrix, n_shot: int, seed: int) -> InitializationCounts:
    """Prepare each basis state and sample n_shot readouts from its column of Λ."""
    if n_shot < 1:
        raise DomainError(f"n_shot must be positive, got {n_shot}")
    rng = np.random.default_rng(seed)
    columns = lam.matrix.T
    counts = [rng.multinomial(n_shot, column / column.sum()).tolist() for column in columns]
    return InitializationCounts(counts=counts, n_shot=n_shot)


def readout_fidelity(lam: CalibrationMatrix) -> float:
    """Mean of the diagonal of Λ."""
    return float(np.mean(np.diag(lam.matrix)))


def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection of each row of v onto the probability simplex."""
    v = np.atleast_2d(np.asarray(v, dtype=float))
    d = v.shape[1]
    u = -np.sort(-v, axis=1)
    css = np.cumsum(u, axis=1) - 1.0
    k = np.arange(1, d + 1)
    active = u - css / k > 0
    last = d - 1 - np.argmax(active[:, ::-1], axis=1)
    theta = css[np.arange(v.shape[0]), last] / (last + 1)
    return np.maximum(v - theta[:, None], 0.0)


def _largest_squared_singular_value(lam: np.ndarray) -> float:
    gram = lam.T @ lam
    vec = np.ones(gram.shape[0]) / np.sqrt(gram.shape[0])
    for _ in range(POWER_ITERATION_STEPS):
        nxt = gram @ vec
        vec = nxt / np.linalg.norm(nxt)
    return float(vec @ gram @ vec)


def solve_simplex_least_squares(
    p_exp: np.ndarray,
    lam: np.ndarray,
    tol: float = MITIGATION_TOL,
    max_iter: int = MITIGATION_MAX_ITER,
) -> Tuple[np.ndarray, List[float]]:
    """
    argmin_{p ≥ 0, Σp = 1} ½‖Λp − p_exp‖² for every row of p_exp.

    Projected gradient with step 1/L, L the largest squared singular value of Λ.
    Stops when no entry moves by more than tol. Returns the solutions and the
    objective (summed over rows) after every iteration.
    """
    targets = np.atleast_2d(np.asarray(p_exp, dtype=float))
    if targets.shape[1] != lam.shape[1]:
        raise DimensionMismatchError(
            f"Probability length {targets.shape[1]} does not match calibration size {lam.shape[1]}"
        )
    step = 1.0 / _largest_squared_singular_value(lam)
    current = project_simplex(targets)
    objectives: List[float] = []
    last_step = np.inf
    for iteration in range(1, max_iter + 1):
        residual = current @ lam.T - targets
        updated = project_simplex(current - step * (residual @ lam))
        last_step = float(np.max(np.abs(updated - current)))
        current = updated
        objectives.append(float(0.5 * np.sum((current @ lam.T - targets) ** 2)))
        if last_step <= tol:
            logger.debug("Simplex least squares converged after %d iterations", iteration)
            return current, objectives
    raise NumericalError(
        f"Least-squares mitigation did not converge in {max_iter} iterations",
        diagnostics={"iterations": max_iter, "objective": objectives[-1], "last_step": last_step},
    )


def mitigate_least_squares_array(
    probs: np.ndarray,
    lam: np.ndarray,
    tol: float = MITIGATION_TOL,
) -> np.ndarray:
    """Row-wise mitigation of an (n, d) batch of measured distributions."""
    solution, _ = solve_simplex_least_squares(probs, lam, tol)
    return solution / solution.sum(axis=1, keepdims=True)


def mitigate_least_squares(
    p_exp: ProbabilityVector,
    lam: CalibrationMatrix,
    tol: float = MITIGATION_TOL,
) -> ProbabilityVector:
    """Error-mitigated distribution closest to p_exp in the image of the simplex under Λ."""
    return ProbabilityVector(probs=mitigate_least_squares_array(p_exp.probs[None, :], lam.matrix, tol)[0])
