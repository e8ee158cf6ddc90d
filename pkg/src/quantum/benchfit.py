"""
Randomized-benchmarking analytics: decay fits, gate fidelities and microwave crosstalk
"""

import csv
import io
import logging
import math
import warnings
from typing import Sequence, Tuple

import numpy as np
from scipy.optimize import OptimizeWarning, curve_fit

from src.config import RB_MAX_FIT_ITER, RB_PHYSICAL_GATES_PER_CLIFFORD
from src.errors import DomainError, FitFailureError, UnidentifiableFitError
from src.models.benchmarking import DecayCurve, DecayFit

logger = logging.getLogger(__name__)

FIT_TOL = 1e-12
CONSTANT_DATA_TOL = 1e-12


def _decay_model(n: np.ndarray, a: float, p: float, b: float) -> np.ndarray:
    return a * p ** n + b


def _decay_jacobian(n: np.ndarray, a: float, p: float, b: float) -> np.ndarray:
    return np.column_stack([p ** n, a * n * p ** (n - 1), np.ones_like(n)])


def _initial_guess(n: np.ndarray, y: np.ndarray) -> Tuple[float, float, float]:
    """Log-linear regression of (y − B₀) with B₀ just below the smallest survival."""
    b0 = float(y.min() - 0.05 * np.ptp(y))
    slope, intercept = np.polyfit(n, np.log(y - b0), 1)
    p0 = float(np.clip(math.exp(slope), 1e-6, 1.0))
    return float(math.exp(intercept)), p0, b0


def fit_exp_decay(curve: DecayCurve) -> DecayFit:
    """
    Least-squares fit of F(N) = A·p^N + B.

    Levenberg–Marquardt with the analytic Jacobian, started from a log-linear guess.
    """
    n = np.asarray(curve.n_cliffords, dtype=float)
    y = np.asarray(curve.survival, dtype=float)
    if np.ptp(y) <= CONSTANT_DATA_TOL:
        raise UnidentifiableFitError("Survival is constant; the decay rate is not identifiable")

    guess = _initial_guess(n, y)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", OptimizeWarning)
        try:
            params, _ = curve_fit(
                _decay_model,
                n,
                y,
                p0=guess,
                jac=_decay_jacobian,
                method="lm",
                xtol=FIT_TOL,
                ftol=FIT_TOL,
                gtol=FIT_TOL,
                maxfev=RB_MAX_FIT_ITER,
            )
        except RuntimeError as exc:
            raise FitFailureError(f"Decay fit did not converge: {exc}") from exc

    a, p, b = (float(x) for x in params)
    rms = float(np.sqrt(np.mean((_decay_model(n, a, p, b) - y) ** 2)))
    logger.debug("Decay fit A=%.6f p=%.8f B=%.6f rms=%.2e", a, p, b, rms)
    return DecayFit(a=a, p=p, b=b, residual_rms=rms)


def avg_gate_fidelity(p: float, d: int) -> Tuple[float, float]:
    """
    Clifford fidelity F_cl = 1 − (d−1)/d·(1 − p) and the physical-gate average
    F_avg = F_cl^(1/1.875).
    """
    if not 0.0 < p <= 1.0:
        raise DomainError(f"Decay p must lie in (0, 1], got {p}")
    if d < 2:
        raise DomainError(f"Dimension must be at least 2, got {d}")
    f_cl = 1.0 - (d - 1) / d * (1.0 - p)
    return f_cl, f_cl ** (1.0 / RB_PHYSICAL_GATES_PER_CLIFFORD)


def irb_fidelity(p0: float, p1: float, d: int) -> float:
    """Interleaved-gate fidelity 1 − (d−1)/d·(1 − p1/p0); values above 1 are returned as-is."""
    if not 0.0 < p0 <= 1.0:
        raise DomainError(f"Reference decay p0 must lie in (0, 1], got {p0}")
    if not 0.0 <= p1 <= 1.0:
        raise DomainError(f"Interleaved decay p1 must lie in [0, 1], got {p1}")
    if d < 2:
        raise DomainError(f"Dimension must be at least 2, got {d}")
    fidelity = 1.0 - (d - 1) / d * (1.0 - p1 / p0)
    if fidelity > 1.0:
        logger.warning("IRB fidelity %.6f exceeds 1 (p1 > p0); statistical fluctuation", fidelity)
    return fidelity


def mw_crosstalk(a_jj: float, t_jj: float, a_ij: float, t_ij: float) -> float:
    """C_{i→j} = (A_jj / A_ij)·(t_jj / t_ij) as a fraction."""
    if a_ij <= 0.0 or t_ij <= 0.0:
        raise DomainError("Crosstalk amplitude and duration must be positive")
    return (a_jj / a_ij) * (t_jj / t_ij)


def synth_rb_curve(
    a: float,
    p: float,
    b: float,
    points: Sequence[int],
    noise_sigma: float = 0.0,
    seed: int = 0,
) -> DecayCurve:
    """Samples of A·p^N + B with optional Gaussian noise, clamped to [0, 1]."""
    if not 0.0 < p <= 1.0:
        raise DomainError(f"Decay p must lie in (0, 1], got {p}")
    if noise_sigma < 0.0:
        raise DomainError(f"noise_sigma must be non-negative, got {noise_sigma}")
    n = np.asarray(points, dtype=float)
    values = _decay_model(n, a, p, b)
    if noise_sigma > 0.0:
        values = values + np.random.default_rng(seed).normal(0.0, noise_sigma, size=n.size)
    return DecayCurve(
        n_cliffords=[int(x) for x in points],
        survival=np.clip(values, 0.0, 1.0).tolist(),
    )


def load_decay_curve(text: str) -> DecayCurve:
    """Parse CSV text with `n_cliffords,survival` columns."""
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or not {"n_cliffords", "survival"} <= set(reader.fieldnames):
        raise DomainError("Decay curve CSV needs columns n_cliffords,survival")
    rows = list(reader)
    return DecayCurve(
        n_cliffords=[int(row["n_cliffords"]) for row in rows],
        survival=[float(row["survival"]) for row in rows],
    )
