"""
Local-magic erasure: the residual-magic objective over U_A ⊗ U_B, the Rz ⊗ Rz
landscape sweep and the grid + Nelder–Mead optimizer
"""

import itertools
import logging
import math
from typing import List, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from src.config import ERASURE_FULL_GRID_DEG, ERASURE_REAL_GRID_DEG, STRUCTURAL_TOL
from src.errors import DimensionMismatchError, DomainError
from src.models.erasure import ANGLE_NAMES, ErasureAngles, ErasureResult, Landscape, OptConfig
from src.models.states import DensityMatrix
from src.quantum.magic import sre_from_expectations
from src.quantum.qcore import dominant_statevector, pauli_expectations_array, purity

logger = logging.getLogger(__name__)

GRID_STARTS = 3
# Rz(π/2) is a Clifford, so the outermost Rz angles only matter modulo 90°.
CLIFFORD_RZ_PERIOD = math.pi / 2


def zyz_matrices(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """(n, 2, 2) stack of Rz(a)·Ry(b)·Rz(c)."""
    a, b, c = (np.atleast_1d(np.asarray(x, dtype=float)) for x in (a, b, c))
    cos, sin = np.cos(b / 2), np.sin(b / 2)
    out = np.empty((a.size, 2, 2), dtype=complex)
    out[:, 0, 0] = np.exp(-0.5j * (a + c)) * cos
    out[:, 0, 1] = -np.exp(-0.5j * (a - c)) * sin
    out[:, 1, 0] = np.exp(0.5j * (a - c)) * sin
    out[:, 1, 1] = np.exp(0.5j * (a + c)) * cos
    return out


def zyz_angles(u: np.ndarray) -> Tuple[float, float, float]:
    """Euler angles (a, b, c) with U ∝ Rz(a)·Ry(b)·Rz(c)."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise DimensionMismatchError(f"Expected a 2×2 unitary, got shape {u.shape}")
    v = u / np.sqrt(np.linalg.det(u))
    b = 2.0 * math.atan2(abs(v[1, 0]), abs(v[1, 1]))
    total = 2.0 * float(np.angle(v[1, 1])) if abs(v[1, 1]) > STRUCTURAL_TOL else 0.0
    diff = 2.0 * float(np.angle(v[1, 0])) if abs(v[1, 0]) > STRUCTURAL_TOL else 0.0
    return (total + diff) / 2.0, b, (total - diff) / 2.0


def _local_unitaries(angles: np.ndarray) -> np.ndarray:
    angles = np.atleast_2d(angles)
    u_a = zyz_matrices(angles[:, 0], angles[:, 1], angles[:, 2])
    u_b = zyz_matrices(angles[:, 3], angles[:, 4], angles[:, 5])
    return np.einsum("nab,ncd->nacbd", u_a, u_b).reshape(len(angles), 4, 4)


def _require_two_qubits(rho: DensityMatrix) -> None:
    if rho.num_qubits != 2:
        raise DimensionMismatchError(f"Erasure acts on two-qubit states, got {rho.num_qubits} qubit(s)")


def erasure_objective_batch(rho: DensityMatrix, angles: np.ndarray) -> np.ndarray:
    """M₂ of (U_A ⊗ U_B) ρ (U_A ⊗ U_B)† for each row of an (n, 6) angle array."""
    unitaries = _local_unitaries(angles)
    rotated = unitaries @ rho.matrix @ np.conj(np.swapaxes(unitaries, 1, 2))
    expectations = pauli_expectations_array(rotated, 2)
    return sre_from_expectations(expectations, purity(rho), rho.dim)


def erasure_objective(rho: DensityMatrix, a: ErasureAngles) -> float:
    _require_two_qubits(rho)
    return float(erasure_objective_batch(rho, a.as_array())[0])


def _rz_angle_grid(gamma_grid: Sequence[float], phi_grid: Sequence[float]) -> np.ndarray:
    gammas, phis = np.meshgrid(np.asarray(gamma_grid, float), np.asarray(phi_grid, float), indexing="ij")
    angles = np.zeros((gammas.size, len(ANGLE_NAMES)))
    angles[:, 2] = gammas.reshape(-1)
    angles[:, 5] = phis.reshape(-1)
    return angles


def sweep_landscape(rho: DensityMatrix, gamma_grid: Sequence[float], phi_grid: Sequence[float]) -> ErasureResult:
    """
    Residual M₂ of (Rz(γ) ⊗ Rz(φ)) ρ (Rz(γ) ⊗ Rz(φ))† on a grid, all other angles zero.

    The reported angles are the first grid minimum in (γ, φ) row-major order.
    """
    _require_two_qubits(rho)
    if len(gamma_grid) == 0 or len(phi_grid) == 0:
        raise DomainError("Landscape grids must be non-empty")
    values = erasure_objective_batch(rho, _rz_angle_grid(gamma_grid, phi_grid))
    landscape = Landscape(
        gamma=[float(g) for g in gamma_grid],
        phi=[float(p) for p in phi_grid],
        values=values.reshape(len(gamma_grid), len(phi_grid)).tolist(),
    )
    gamma, phi, best = landscape.minimum()
    logger.debug("Landscape minimum %.6f at (%.2f°, %.2f°)", best, math.degrees(gamma), math.degrees(phi))
    return ErasureResult(
        angles=ErasureAngles(gamma=gamma, phi=phi),
        residual_m2=best,
        evaluations=values.size,
        landscape=landscape,
    )


def _degree_grid(step_deg: float, period: float = 2.0 * math.pi) -> np.ndarray:
    return np.arange(0.0, period - 1e-12, math.radians(step_deg))


def _coarse_grid(rho: DensityMatrix, real_amplitude: bool) -> Tuple[np.ndarray, np.ndarray]:
    """Grid angles and their objective values."""
    if real_amplitude:
        grid = _degree_grid(ERASURE_REAL_GRID_DEG)
        angles = _rz_angle_grid(grid, grid)
        return angles, erasure_objective_batch(rho, angles)

    full = _degree_grid(ERASURE_FULL_GRID_DEG)
    outer = _degree_grid(ERASURE_FULL_GRID_DEG, CLIFFORD_RZ_PERIOD)
    single = np.array(list(itertools.product(outer, full, full)))
    batches_angles: List[np.ndarray] = []
    batches_values: List[np.ndarray] = []
    # one batch per U_A setting
    for a_angles in single:
        angles = np.hstack([np.tile(a_angles, (len(single), 1)), single])
        batches_angles.append(angles)
        batches_values.append(erasure_objective_batch(rho, angles))
    return np.vstack(batches_angles), np.concatenate(batches_values)


def schmidt_warm_start(rho: DensityMatrix) -> np.ndarray:
    """
    Angles of the local unitaries that take the dominant eigenvector to
    s₀|00⟩ + s₁|11⟩ with real non-negative Schmidt coefficients.
    """
    amplitudes = dominant_statevector(rho).reshape(2, 2)
    left, _, right_h = np.linalg.svd(amplitudes)
    u_a = left.conj().T
    u_b = right_h.conj()
    return np.array([*zyz_angles(u_a), *zyz_angles(u_b)])


def _is_real_amplitude(rho: DensityMatrix) -> bool:
    return bool(np.max(np.abs(rho.matrix.imag)) <= STRUCTURAL_TOL)


def optimize_erasure(rho: DensityMatrix, cfg: OptConfig = OptConfig()) -> ErasureResult:
    """
    Minimize the residual magic over U_A ⊗ U_B.

    A coarse grid (Rz ⊗ Rz at 15° for real-amplitude inputs, all six Euler angles at
    45° otherwise) is followed by Nelder–Mead refinement from the Schmidt warm start,
    the best grid points and seeded random restarts. The refinement budget is shared
    across starts; when it runs out first the best point so far is returned with
    converged=False.
    """
    _require_two_qubits(rho)
    real_amplitude = _is_real_amplitude(rho) if cfg.real_amplitude is None else cfg.real_amplitude
    grid_angles, grid_values = _coarse_grid(rho, real_amplitude)
    order = np.argsort(grid_values, kind="stable")

    rng = np.random.default_rng(cfg.seed)
    starts = [schmidt_warm_start(rho)]
    starts.extend(grid_angles[i] for i in order[:GRID_STARTS])
    starts.extend(rng.uniform(0.0, 2.0 * math.pi, size=(cfg.restarts, len(ANGLE_NAMES))))

    def objective(x: np.ndarray) -> float:
        return float(erasure_objective_batch(rho, x)[0])

    best_x = grid_angles[order[0]]
    best_value = float(grid_values[order[0]])
    evaluations = len(grid_values)
    budget = cfg.max_evaluations
    runs: List[Tuple[float, bool]] = []
    for k, start in enumerate(starts):
        maxfev = budget // (len(starts) - k)
        if maxfev < 1:
            break
        # quadratic near the minimum: an x error of √tol costs tol in the objective
        result = minimize(
            objective,
            start,
            method="Nelder-Mead",
            options={"xatol": math.sqrt(cfg.tol), "fatol": cfg.tol, "maxfev": maxfev},
        )
        budget -= result.nfev
        evaluations += result.nfev
        runs.append((float(result.fun), bool(result.success)))
        if result.fun < best_value:
            best_x, best_value = result.x, float(result.fun)

    converged = any(ok and value <= best_value + cfg.tol for value, ok in runs)
    if not converged:
        logger.warning("Erasure optimizer stopped at %.8f without meeting tol=%g", best_value, cfg.tol)
    logger.info("Erasure residual %.8f after %d evaluations", best_value, evaluations)
    return ErasureResult(
        angles=ErasureAngles.from_array(best_x),
        residual_m2=max(best_value, 0.0),
        evaluations=evaluations,
        converged=converged,
    )
