"""
Randomized Clifford Measurements: local Clifford sampling, outcome datasets and
the purity / stabilizer-purity / SRE estimators with error propagation
"""

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.config import SINGLE_QUBIT_CLIFFORDS
from src.errors import DimensionMismatchError, DomainError, UndersampledDataError
from src.models.estimates import EstimateWithError, RcmDataset
from src.models.noise_config import NoiseConfig
from src.models.states import CalibrationMatrix, DensityMatrix, ProbabilityVector
from src.quantum.circuits import clifford_matrices
from src.quantum.mitigation import mitigate_least_squares_array
from src.quantum.noise import apply_readout_array, sample_shot_frequencies
from src.quantum.qcore import check_subsystem

logger = logging.getLogger(__name__)

CliffordTuple = Tuple[int, ...]


def sample_local_cliffords(n_qubits: int, n_rand: int, seed: int) -> List[CliffordTuple]:
    """
    Uniform i.i.d. tuples of single-qubit Clifford ids, one id per qubit.

    When n_rand equals 24^N every tuple is returned exactly once in lexicographic
    order (exhaustive mode).
    """
    if n_qubits < 1:
        raise DomainError(f"Need at least one qubit, got {n_qubits}")
    if n_rand < 2:
        raise DomainError(f"n_rand must be at least 2, got {n_rand}")
    if n_rand == SINGLE_QUBIT_CLIFFORDS ** n_qubits:
        return list(itertools.product(range(SINGLE_QUBIT_CLIFFORDS), repeat=n_qubits))
    rng = np.random.default_rng(seed)
    draws = rng.integers(0, SINGLE_QUBIT_CLIFFORDS, size=(n_rand, n_qubits))
    return [tuple(int(i) for i in row) for row in draws]


def local_clifford_unitaries(tuples: Sequence[CliffordTuple]) -> np.ndarray:
    """(n, d, d) stack of ⊗_i C_{ids[i]} with qubit 0 leftmost."""
    ids = np.asarray(tuples, dtype=int)
    if ids.ndim != 2:
        raise DimensionMismatchError("Clifford tuples must all have the same length")
    stack = clifford_matrices()
    result = stack[ids[:, 0]]
    for q in range(1, ids.shape[1]):
        factor = stack[ids[:, q]]
        da = result.shape[1]
        result = np.einsum("nab,ncd->nacbd", result, factor).reshape(len(ids), 2 * da, 2 * da)
    return result


def _outcome_probabilities(
    rho: np.ndarray,
    unitaries: np.ndarray,
    noise: NoiseConfig,
    first_index: int,
) -> np.ndarray:
    rotated = unitaries @ rho @ np.conj(np.swapaxes(unitaries, 1, 2))
    probs = np.clip(np.real(np.diagonal(rotated, axis1=1, axis2=2)), 0.0, None)
    probs = probs / probs.sum(axis=1, keepdims=True)
    if noise.readout_lambda is not None:
        probs = apply_readout_array(probs, noise.readout_lambda.matrix)
    if noise.n_shot is not None:
        sampled = np.empty_like(probs)
        for offset, row in enumerate(probs):
            rng = np.random.default_rng(np.random.SeedSequence([noise.seed, first_index + offset]))
            sampled[offset] = sample_shot_frequencies(row, noise.n_shot, rng)
        probs = sampled
    return probs


def _chunks(n: int, workers: int) -> List[Tuple[int, int]]:
    bounds = np.linspace(0, n, max(1, min(workers, n)) + 1).astype(int)
    return [(int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]


def collect_dataset(
    rho: DensityMatrix,
    tuples: Sequence[CliffordTuple],
    noise: Optional[NoiseConfig] = None,
    workers: int = 1,
) -> RcmDataset:
    """
    Outcome distributions P(s|C) for every Clifford tuple.

    Each sample applies C = ⊗C_i, takes the Born probabilities, then the readout
    matrix and finite shots when configured. Shot noise for sample k is seeded from
    (noise.seed, k), so the dataset does not depend on the number of workers.
    """
    noise = noise or NoiseConfig.noiseless()
    if any(len(t) != rho.num_qubits for t in tuples):
        raise DimensionMismatchError(f"Every Clifford tuple needs {rho.num_qubits} id(s)")
    if noise.readout_lambda is not None and noise.readout_lambda.matrix.shape != rho.matrix.shape:
        raise DimensionMismatchError("Readout matrix size does not match the register")

    unitaries = local_clifford_unitaries(tuples)
    chunks = _chunks(len(tuples), workers)
    if len(chunks) == 1:
        parts = [_outcome_probabilities(rho.matrix, unitaries, noise, 0)]
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(
                pool.map(
                    lambda bounds: _outcome_probabilities(
                        rho.matrix, unitaries[bounds[0]:bounds[1]], noise, bounds[0]
                    ),
                    chunks,
                )
            )
    probs = np.concatenate(parts, axis=0)
    logger.debug("Collected %d outcome distributions with %d worker(s)", len(probs), len(chunks))
    return RcmDataset(
        num_qubits=rho.num_qubits,
        clifford_ids=[tuple(t) for t in tuples],
        prob_vectors=probs.tolist(),
        n_shot=noise.n_shot,
        seed=noise.seed,
    )


def hamming_xor_weight(strings: Sequence[str]) -> int:
    """Number of 1-bits in the XOR of 2 or 4 equal-length bitstrings."""
    if len(strings) not in (2, 4):
        raise DomainError(f"Expected 2 or 4 bitstrings, got {len(strings)}")
    lengths = {len(s) for s in strings}
    if len(lengths) != 1:
        raise DimensionMismatchError(f"Bitstrings differ in length: {list(strings)}")
    combined = 0
    for s in strings:
        combined ^= int(s, 2)
    return bin(combined).count("1")


@lru_cache(maxsize=None)
def _popcounts(d: int) -> np.ndarray:
    return np.array([bin(i).count("1") for i in range(d)])


@lru_cache(maxsize=None)
def _pair_weights(d: int) -> np.ndarray:
    """(−1/2)^{|s₁⊕s₂|} for all outcome pairs."""
    idx = np.arange(d)
    weights = (-0.5) ** _popcounts(d)[idx[:, None] ^ idx[None, :]]
    weights.setflags(write=False)
    return weights


@lru_cache(maxsize=None)
def _quad_weights(d: int) -> np.ndarray:
    """(−1/2)^{|s₁⊕s₂⊕s₃⊕s₄|} for all outcome quadruples."""
    idx = np.arange(d)
    xor = (
        idx[:, None, None, None]
        ^ idx[None, :, None, None]
        ^ idx[None, None, :, None]
        ^ idx[None, None, None, :]
    )
    weights = (-0.5) ** _popcounts(d)[xor]
    weights.setflags(write=False)
    return weights


def purity_samples(probs: np.ndarray) -> np.ndarray:
    """Per-sample X_C = d Σ_{s₁,s₂} (−2)^{−|s₁⊕s₂|} P(s₁|C) P(s₂|C)."""
    d = probs.shape[1]
    return d * np.einsum("ns,st,nt->n", probs, _pair_weights(d), probs)


def stabilizer_purity_samples(probs: np.ndarray) -> np.ndarray:
    """Per-sample Y_C = Σ_{s₁..s₄} (−2)^{−|s₁⊕s₂⊕s₃⊕s₄|} Π P(s_i|C)."""
    d = probs.shape[1]
    return np.einsum("na,nb,nc,ne,abce->n", probs, probs, probs, probs, _quad_weights(d))


def estimate_purity(ds: RcmDataset) -> EstimateWithError:
    return EstimateWithError.from_samples(purity_samples(ds.probabilities()))


def estimate_stabilizer_purity(ds: RcmDataset) -> EstimateWithError:
    """
    Unsigned quadruple statistic; its exhaustive exact-probability mean equals
    d⁻² Σ_P Tr(Pρ)⁴.
    """
    return EstimateWithError.from_samples(stabilizer_purity_samples(ds.probabilities()))


def _log_estimate(samples: np.ndarray, label: str) -> Tuple[float, float]:
    mean = float(np.mean(samples))
    if mean <= 0.0:
        raise UndersampledDataError(f"Estimated {label} mean is {mean:.3e}; logarithm undefined")
    return mean, float(np.var(samples, ddof=1))


def estimate_sre(ds: RcmDataset) -> EstimateWithError:
    """
    M₂ = −log₂ W̄ + log₂ P̄ − log₂ d with

        ΔM₂ = (1/ln 2) √(Var W / (N W̄²) + Var P / (N P̄²)).

    The covariance between the two statistics is taken as zero.
    """
    probs = ds.probabilities()
    n = ds.n_samples
    d = probs.shape[1]
    w_mean, w_var = _log_estimate(stabilizer_purity_samples(probs), "stabilizer purity")
    p_mean, p_var = _log_estimate(purity_samples(probs), "purity")
    m2 = -math.log2(w_mean) + math.log2(p_mean) - math.log2(d)
    error = math.sqrt(w_var / (n * w_mean ** 2) + p_var / (n * p_mean ** 2)) / math.log(2)
    return EstimateWithError.from_sampling_error(m2, error, n)


def estimate_renyi2_entropy(ds: RcmDataset) -> EstimateWithError:
    """S₂ = −log₂ P̄ with ΔS₂ = ΔP / (P̄ ln 2)."""
    samples = purity_samples(ds.probabilities())
    mean, var = _log_estimate(samples, "purity")
    n = ds.n_samples
    error = math.sqrt(var / n) / (mean * math.log(2))
    return EstimateWithError.from_sampling_error(-math.log2(mean), error, n)


def _marginalize_array(probs: np.ndarray, keep: Iterable[int], num_qubits: int) -> np.ndarray:
    kept = check_subsystem(keep, num_qubits)
    traced = tuple(q + 1 for q in range(num_qubits) if q not in kept)
    n = probs.shape[0]
    return probs.reshape([n] + [2] * num_qubits).sum(axis=traced).reshape(n, 2 ** len(kept))


def marginalize(p: ProbabilityVector, keep: Iterable[int]) -> ProbabilityVector:
    """P(s_A) = Σ_{s_B} P(s_A, s_B), kept qubits in ascending order."""
    return ProbabilityVector(probs=_marginalize_array(p.probs[None, :], keep, p.num_qubits)[0])


def estimate_rdm_purity(ds: RcmDataset, keep: Iterable[int]) -> EstimateWithError:
    """Purity statistic on the marginal outcome distributions of the kept qubits."""
    marginals = _marginalize_array(ds.probabilities(), keep, ds.num_qubits)
    return EstimateWithError.from_samples(purity_samples(marginals))


def mitigate_dataset(ds: RcmDataset, lam: CalibrationMatrix) -> RcmDataset:
    """Copy of the dataset with every distribution passed through least-squares mitigation."""
    if lam.num_qubits != ds.num_qubits:
        raise DimensionMismatchError(
            f"Calibration matrix covers {lam.num_qubits} qubit(s), dataset has {ds.num_qubits}"
        )
    mitigated = mitigate_least_squares_array(ds.probabilities(), lam.matrix)
    logger.debug("Mitigated %d distributions", ds.n_samples)
    return ds.model_copy(update={"prob_vectors": mitigated.tolist(), "mitigated": True})
