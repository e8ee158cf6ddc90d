"""
Exact magic oracles: purity, stabilizer purity, stabilizer Rényi entropy (α = 2),
closed-form local/non-local magic for two qubits, and the distillation check
"""

import logging
import math
from typing import Optional

import numpy as np

from src.config import FACTORIZATION_TOL, IDENTITY_TOL, STRUCTURAL_TOL
from src.errors import DimensionMismatchError, DomainError, InconsistencyError, OutOfModelError
from src.models.estimates import MagicReport, SchmidtSpectrum
from src.models.states import DensityMatrix
from src.quantum.qcore import dominant_statevector, partial_trace, pauli_expectations, purity, tensor

logger = logging.getLogger(__name__)

PURE_TOL = 1e-9


def pauli_spectrum_sum(rho: DensityMatrix, power: int) -> float:
    """Σ_P Tr(Pρ)^power over all 4^N Pauli strings."""
    if power < 1:
        raise DomainError(f"Power must be positive, got {power}")
    return float(np.sum(pauli_expectations(rho) ** power))


def stabilizer_purity_from_expectations(expectations: np.ndarray, d: int) -> np.ndarray:
    """W = d⁻² Σ_P Tr(Pρ)⁴ along the last axis."""
    return np.sum(expectations ** 4, axis=-1) / d ** 2


def sre_from_expectations(expectations: np.ndarray, purity_value: float, d: int) -> np.ndarray:
    """M₂ from Pauli expectations of states that share one purity (unitary orbits)."""
    w = stabilizer_purity_from_expectations(expectations, d)
    return -np.log2(w) + math.log2(purity_value) - math.log2(d)


def stabilizer_purity_exact(rho: DensityMatrix) -> float:
    """W(ρ) = d⁻² Σ_P Tr(Pρ)⁴ by brute-force Pauli enumeration."""
    return float(stabilizer_purity_from_expectations(pauli_expectations(rho), rho.dim))


def sre_exact(rho: DensityMatrix) -> float:
    """
    Mixed-state stabilizer Rényi entropy M₂ = −log₂ W + log₂ 𝒫 − log₂ d.

    Reduces to the pure-state definition when 𝒫 = 1 and vanishes on I/d.
    """
    value = -math.log2(stabilizer_purity_exact(rho)) + math.log2(purity(rho)) - math.log2(rho.dim)
    return value + 0.0


def nonlocal_magic_schmidt(lam: float) -> float:
    """M^NL = −log₂(4(λ−1)λ(1−2λ)² + 1) for Schmidt weight λ."""
    if not -STRUCTURAL_TOL <= lam <= 1.0 + STRUCTURAL_TOL:
        raise DomainError(f"Schmidt weight must lie in [0, 1], got {lam}")
    lam = min(max(lam, 0.0), 1.0)
    return max(-math.log2(4.0 * (lam - 1.0) * lam * (1.0 - 2.0 * lam) ** 2 + 1.0), 0.0)


def nonlocal_magic_theta(theta: float) -> float:
    """M^NL(θ) = log₂(8 / (7 + cos 4θ)) with λ = cos²(θ/2)."""
    return max(math.log2(8.0 / (7.0 + math.cos(4.0 * theta))), 0.0)


def nonlocal_magic_from_rdm_purity(p_a: float) -> float:
    """M^NL = −log₂(4𝒫_A² − 6𝒫_A + 3) for a pure two-qubit state."""
    if not 0.5 - STRUCTURAL_TOL <= p_a <= 1.0 + STRUCTURAL_TOL:
        raise DomainError(f"Reduced purity must lie in [0.5, 1], got {p_a}")
    p_a = min(max(p_a, 0.5), 1.0)
    return max(-math.log2(4.0 * p_a ** 2 - 6.0 * p_a + 3.0), 0.0)


def rdm_purity_depolarized(lam: float, p_dep: float) -> float:
    """Single-qubit reduced purity of a globally depolarized pure state with Schmidt weight λ."""
    return p_dep ** 2 * (lam ** 2 + (1.0 - lam) ** 2) + p_dep * (1.0 - p_dep) + (1.0 - p_dep) ** 2 / 2.0


def schmidt_weight_from_noisy_rdm_purity(p_a_measured: float, p_dep: float) -> float:
    """Invert rdm_purity_depolarized for λ ∈ [0.5, 1]."""
    if not 0.0 < p_dep <= 1.0:
        raise DomainError(f"Survival probability must lie in (0, 1], got {p_dep}")
    floor = rdm_purity_depolarized(0.5, p_dep)
    ceiling = rdm_purity_depolarized(1.0, p_dep)
    if not floor - IDENTITY_TOL <= p_a_measured <= ceiling + IDENTITY_TOL:
        raise OutOfModelError(
            f"Reduced purity {p_a_measured:.6f} outside attainable range "
            f"[{floor:.6f}, {ceiling:.6f}] for p_dep={p_dep}"
        )
    pure_part = (p_a_measured - p_dep * (1.0 - p_dep) - (1.0 - p_dep) ** 2 / 2.0) / p_dep ** 2
    discriminant = min(max(2.0 * pure_part - 1.0, 0.0), 1.0)
    return (1.0 + math.sqrt(discriminant)) / 2.0


def nonlocal_magic_noisy(p_a_measured: float, p_dep: float) -> float:
    """Non-local magic from a reduced purity measured after global depolarizing noise."""
    return nonlocal_magic_schmidt(schmidt_weight_from_noisy_rdm_purity(p_a_measured, p_dep))


def sre_nlm_depolarized(p_err: float, theta: float) -> float:
    """
    Closed-form M₂ of (cos(θ/2)|00⟩ − i·sin(θ/2)|11⟩) after global depolarizing
    with error probability p_err = 1 − p_dep.
    """
    if not 0.0 <= p_err <= 1.0:
        raise DomainError(f"Error probability must lie in [0, 1], got {p_err}")
    p = p_err
    bracket = 4.0 * ((p - 1.0) ** 4 * math.cos(4.0 * theta) + 5.0 * (p - 2.0) * p * ((p - 2.0) * p + 2.0) + 7.0)
    return -math.log2(bracket) + math.log2(3.0 * (p - 2.0) * p + 4.0) + 3.0


def _require_two_qubits(rho: DensityMatrix) -> None:
    if rho.num_qubits != 2:
        raise DimensionMismatchError(f"Expected a two-qubit state, got {rho.num_qubits} qubit(s)")


def schmidt_spectrum(rho: DensityMatrix) -> SchmidtSpectrum:
    """Schmidt weight of the dominant eigenvector of a two-qubit state."""
    _require_two_qubits(rho)
    amplitudes = dominant_statevector(rho).reshape(2, 2)
    singular = np.linalg.svd(amplitudes, compute_uv=False) ** 2
    return SchmidtSpectrum.from_lambda(float(singular[0] / singular.sum()))


def local_magic(rho: DensityMatrix, nl: float) -> float:
    """Total magic minus the supplied non-local part."""
    total = sre_exact(rho)
    if nl > total + PURE_TOL:
        raise InconsistencyError(f"Non-local magic {nl:.6f} exceeds total magic {total:.6f}")
    return total - nl


def magic_report(rho: DensityMatrix, p_dep: Optional[float] = None) -> MagicReport:
    """
    Purity, stabilizer purity and M₂ of ρ; for two qubits also the non-local/local split.

    The split uses the Schmidt spectrum for pure states and the noisy reduced-purity
    inversion when p_dep is given.
    """
    pur = purity(rho)
    w = stabilizer_purity_exact(rho)
    m2 = sre_exact(rho)
    nonlocal_part = None
    if rho.num_qubits == 2:
        if p_dep is not None:
            nonlocal_part = nonlocal_magic_noisy(purity(partial_trace(rho, {0})), p_dep)
        elif pur > 1.0 - PURE_TOL:
            nonlocal_part = nonlocal_magic_schmidt(schmidt_spectrum(rho).lam)
    local_part = None if nonlocal_part is None else m2 - nonlocal_part
    return MagicReport(
        purity=pur,
        stabilizer_purity=w,
        m2=m2,
        m2_nonlocal=nonlocal_part,
        m2_local=local_part,
    )


def check_distillation_lemma(psi: DensityMatrix, c_a: np.ndarray, c_bc: np.ndarray) -> Optional[bool]:
    """
    Apply C_A ⊗ C_BC to ψ_AB ⊗ |0⟩⟨0|_C and test whether the ancilla gained more
    magic than ψ's local magic.

    Returns None when the output does not factorize as ψ' ⊗ φ (not applicable).
    """
    _require_two_qubits(psi)
    if purity(psi) < 1.0 - PURE_TOL:
        raise DomainError("Distillation check needs a pure two-qubit input")
    if c_a.shape != (2, 2) or c_bc.shape != (4, 4):
        raise DimensionMismatchError("Expected a 2×2 C_A and a 4×4 C_BC")

    ancilla = DensityMatrix.basis_state("0")
    unitary = tensor(c_a, c_bc)
    output = psi.tensor(ancilla).evolve(unitary)
    phi = partial_trace(output, {2})
    if purity(phi) < 1.0 - FACTORIZATION_TOL:
        return None

    m_local = local_magic(psi, nonlocal_magic_schmidt(schmidt_spectrum(psi).lam))
    distilled = sre_exact(phi)
    logger.debug("Distilled ancilla magic %.6f vs local magic %.6f", distilled, m_local)
    return distilled <= m_local + PURE_TOL
