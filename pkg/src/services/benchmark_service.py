"""
Benchmarking analytics service
"""

from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from src.errors import MagicSimError
from src.models.benchmarking import DecayCurve
from src.quantum.benchfit import avg_gate_fidelity, fit_exp_decay, irb_fidelity, mw_crosstalk
from src.services.responses import computation_error, unexpected_error, validation_error


class BenchmarkService:
    """
    Service for RB / IRB decay fits and crosstalk coefficients.
    """

    def fit_rb(
        self,
        n_cliffords: List[int],
        survival: List[float],
        d: int = 2,
        interleaved_survival: Optional[List[float]] = None,
    ) -> Dict[str, Any]:
        """
        Fit A·p^N + B to reference (and optionally interleaved) RB data.

        Args:
            n_cliffords: Sequence lengths
            survival: Reference survival probabilities
            d: Hilbert-space dimension of the benchmarked register
            interleaved_survival: Survival with the target gate interleaved, same lengths

        Returns:
            Fitted parameters, Clifford and average gate fidelity, and the interleaved
            gate fidelity when interleaved data is given
        """
        try:
            reference = fit_exp_decay(DecayCurve(n_cliffords=n_cliffords, survival=survival))
            f_cl, f_avg = avg_gate_fidelity(reference.p, d)
            result: Dict[str, Any] = {
                "reference": reference.model_dump(mode="json"),
                "f_clifford": f_cl,
                "f_average": f_avg,
            }
            if interleaved_survival is not None:
                interleaved = fit_exp_decay(DecayCurve(n_cliffords=n_cliffords, survival=interleaved_survival))
                f_gate = irb_fidelity(reference.p, interleaved.p, d)
                result["interleaved"] = interleaved.model_dump(mode="json")
                result["f_gate"] = f_gate
                result["statistical_fluctuation"] = f_gate > 1.0
            return result
        except MagicSimError as e:
            return computation_error(e)
        except ValidationError as e:
            return validation_error(e)
        except Exception as e:
            return unexpected_error(e)

    def crosstalk(self, a_jj: float, t_jj: float, a_ij: float, t_ij: float) -> Dict[str, Any]:
        """
        Microwave crosstalk coefficient C_{i→j}.

        Returns:
            Coefficient as a fraction and in percent
        """
        try:
            value = mw_crosstalk(a_jj, t_jj, a_ij, t_ij)
            return {"coefficient": value, "percent": 100.0 * value}
        except MagicSimError as e:
            return computation_error(e)
