"""
Exact magic service
"""

from typing import Any, Dict, Optional

from pydantic import ValidationError

from src.errors import MagicSimError
from src.models.scenario import params_to_radians
from src.quantum.circuits import prepare_state
from src.quantum.magic import magic_report, schmidt_spectrum
from src.quantum.qcore import partial_trace, purity
from src.services.responses import check_state_id, computation_error, unexpected_error, validation_error


class MagicService:
    """
    Service for exact (oracle) magic of the named preparation circuits.
    """

    def magic_exact(
        self,
        state: str,
        params_deg: Optional[Dict[str, float]] = None,
        p_dep_cz: float = 1.0,
    ) -> Dict[str, Any]:
        """
        Purity, stabilizer purity and M₂ of a prepared state.

        Args:
            state: State id such as LM, M_erased or NLM
            params_deg: State parameters in degrees (theta, gamma, phi, erase); t switches T gates on
            p_dep_cz: Survival probability of the depolarizing channel after every CZ

        Returns:
            Magic summary; two-qubit states also carry the reduced purity and the
            local / non-local split
        """
        state_id, error = check_state_id(state)
        if error:
            return error
        params_deg = params_deg or {}
        params = params_to_radians(params_deg)
        try:
            rho, circuit = prepare_state(state_id, params, p_dep_cz)
            p_total = p_dep_cz ** circuit.count_cz()
            report = magic_report(rho, p_dep=p_total if p_total < 1.0 else None)
            result: Dict[str, Any] = {
                "state": state_id.value,
                "params_deg": params_deg,
                "p_dep_cz": p_dep_cz,
                "num_qubits": rho.num_qubits,
                "cz_count": circuit.count_cz(),
                **report.model_dump(mode="json"),
            }
            if rho.num_qubits == 2:
                result["rdm_purity"] = purity(partial_trace(rho, {0}))
                result["schmidt_lambda"] = schmidt_spectrum(rho).lam
            return result
        except MagicSimError as e:
            return computation_error(e)
        except ValidationError as e:
            return validation_error(e)
        except Exception as e:
            return unexpected_error(e)
