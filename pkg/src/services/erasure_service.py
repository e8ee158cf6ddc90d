"""
Local-magic erasure service
"""

import math
from typing import Any, Dict, Optional

import numpy as np
from pydantic import ValidationError

from src.config import FIG4_GRID_STEP_DEG
from src.errors import DomainError, MagicSimError
from src.models.erasure import OptConfig
from src.models.scenario import params_to_radians
from src.quantum.circuits import prepare_state
from src.quantum.erasure import optimize_erasure, sweep_landscape
from src.quantum.magic import nonlocal_magic_schmidt, schmidt_spectrum
from src.services.responses import check_state_id, computation_error, unexpected_error, validation_error


class ErasureService:
    """
    Service for landscape sweeps and erasure optimization on prepared states.
    """

    def sweep(
        self,
        state: str,
        params_deg: Optional[Dict[str, float]] = None,
        p_dep_cz: float = 1.0,
        step_deg: float = FIG4_GRID_STEP_DEG,
    ) -> Dict[str, Any]:
        """
        Rz(γ) ⊗ Rz(φ) landscape over [0°, 360°] in both angles.

        Returns:
            Minimum value and location plus the landscape as CSV
        """
        state_id, error = check_state_id(state)
        if error:
            return error
        try:
            if step_deg <= 0.0:
                raise DomainError(f"Grid step must be positive, got {step_deg}")
            rho, _ = prepare_state(state_id, params_to_radians(params_deg), p_dep_cz)
            grid = np.radians(np.arange(0.0, 360.0 + step_deg / 2, step_deg))
            result = sweep_landscape(rho, grid, grid)
            return {
                "state": state_id.value,
                "minimum": result.residual_m2,
                "gamma_deg": math.degrees(result.angles.gamma),
                "phi_deg": math.degrees(result.angles.phi),
                "evaluations": result.evaluations,
                "csv": result.to_csv(),
            }
        except MagicSimError as e:
            return computation_error(e)
        except ValidationError as e:
            return validation_error(e)
        except Exception as e:
            return unexpected_error(e)

    def optimize(
        self,
        state: str,
        params_deg: Optional[Dict[str, float]] = None,
        p_dep_cz: float = 1.0,
        seed: int = 0,
    ) -> Dict[str, Any]:
        """
        Minimize residual magic over U_A ⊗ U_B.

        Returns:
            Residual magic, Euler angles in degrees, convergence flag and the
            Schmidt non-local magic of the dominant eigenvector for comparison
        """
        state_id, error = check_state_id(state)
        if error:
            return error
        try:
            rho, _ = prepare_state(state_id, params_to_radians(params_deg), p_dep_cz)
            result = optimize_erasure(rho, OptConfig(seed=seed))
            return {
                "state": state_id.value,
                "residual_m2": result.residual_m2,
                "angles_deg": result.angles.to_degrees(),
                "evaluations": result.evaluations,
                "converged": result.converged,
                "m2_nonlocal_schmidt": nonlocal_magic_schmidt(schmidt_spectrum(rho).lam),
            }
        except MagicSimError as e:
            return computation_error(e)
        except ValidationError as e:
            return validation_error(e)
        except Exception as e:
            return unexpected_error(e)
