"""
Readout calibration and mitigation service
"""

from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from src.errors import MagicSimError
from src.models.benchmarking import InitializationCounts
from src.models.estimates import RcmDataset
from src.models.states import CalibrationMatrix, ProbabilityVector
from src.quantum.mitigation import calibration_from_counts, mitigate_least_squares, readout_fidelity
from src.quantum.rcm import mitigate_dataset
from src.services.responses import computation_error, error_response, unexpected_error, validation_error
from src.storage import ResultStorage


class MitigationService:
    """
    Service for building calibration matrices and mitigating measured distributions.
    """

    def __init__(self, datasets: ResultStorage[RcmDataset]):
        """
        Initialize MitigationService.

        Args:
            datasets: Storage holding collected datasets
        """
        self.datasets = datasets

    @staticmethod
    def _resolve_lambda(
        lambda_rows: Optional[List[List[float]]],
        counts: Optional[List[List[int]]],
        n_shot: Optional[int],
    ) -> CalibrationMatrix:
        if lambda_rows is not None:
            return CalibrationMatrix.from_json_list(lambda_rows)
        return calibration_from_counts(InitializationCounts(counts=counts, n_shot=n_shot))

    def calibrate(self, counts: List[List[int]], n_shot: int) -> Dict[str, Any]:
        """
        Estimate Λ from initialization counts.

        Args:
            counts: Row i holds the outcome counts after preparing basis state i
            n_shot: Shots per prepared state

        Returns:
            Calibration matrix and readout fidelity
        """
        try:
            lam = calibration_from_counts(InitializationCounts(counts=counts, n_shot=n_shot))
            return {"lambda": lam.to_json_list(), "readout_fidelity": readout_fidelity(lam)}
        except MagicSimError as e:
            return computation_error(e)
        except ValidationError as e:
            return validation_error(e)
        except Exception as e:
            return unexpected_error(e)

    def mitigate(
        self,
        probs: List[float],
        lambda_rows: Optional[List[List[float]]] = None,
        counts: Optional[List[List[int]]] = None,
        n_shot: Optional[int] = None,
    ) -> Dict[str, Any]:
        """
        Least-squares mitigation of one measured distribution.

        Args:
            probs: Measured outcome probabilities
            lambda_rows: Calibration matrix (column j = preparation j)
            counts: Initialization counts used when no matrix is given
            n_shot: Shots per prepared state for counts

        Returns:
            Mitigated distribution and the calibration used
        """
        if lambda_rows is None and counts is None:
            return error_response("Either a calibration matrix or initialization counts is required")
        try:
            lam = self._resolve_lambda(lambda_rows, counts, n_shot)
            mitigated = mitigate_least_squares(ProbabilityVector(probs=probs), lam)
            return {
                "probs": [float(x) for x in mitigated.probs],
                "lambda": lam.to_json_list(),
                "readout_fidelity": readout_fidelity(lam),
            }
        except MagicSimError as e:
            return computation_error(e)
        except ValidationError as e:
            return validation_error(e)
        except Exception as e:
            return unexpected_error(e)

    def mitigate_dataset(self, name: str, lambda_rows: List[List[float]], target: Optional[str] = None) -> Dict[str, Any]:
        """
        Mitigate every distribution of a stored dataset.

        Args:
            name: Stored dataset name
            lambda_rows: Calibration matrix
            target: Name for the mitigated copy (default: <name>_mitigated)

        Returns:
            Name and size of the stored mitigated dataset
        """
        ds, error = self.datasets.get_or_error(name)
        if error:
            return error
        try:
            mitigated = mitigate_dataset(ds, CalibrationMatrix.from_json_list(lambda_rows))
        except MagicSimError as e:
            return computation_error(e)
        except ValidationError as e:
            return validation_error(e)
        target = target or f"{name}_mitigated"
        self.datasets.add(target, mitigated)
        return {"status": "success", "name": target, "n_samples": mitigated.n_samples}
