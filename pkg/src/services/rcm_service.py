"""
Scenario pipeline service: prepare → depolarize → RCM dataset → mitigation → estimators → report
"""

import json
import logging
import math
from typing import Any, Dict, List, Optional, Tuple

import httpx
import yaml
from pydantic import ValidationError

from src.config import (
    ERROR_FETCH_FAILED,
    ERROR_PARSE_FAILED,
    IDENTITY_TOL,
    REPORT_SIGMA_MULTIPLIER,
    SINGLE_QUBIT_CLIFFORDS,
)
from src.errors import MagicSimError, ScenarioError
from src.loaders.scenario_loader import ScenarioLoader
from src.models.circuit import StateId
from src.models.estimates import EstimateWithError, RcmDataset
from src.models.noise_config import NoiseConfig
from src.models.report import Provenance, Report, ReportCheck, ReportRow, ReportValue
from src.models.scenario import EstimatorKind, EstimatorSpec, Scenario, ScenarioNoise
from src.models.states import CalibrationMatrix, DensityMatrix
from src.quantum.circuits import paper_state, run_circuit
from src.quantum.magic import (
    nonlocal_magic_noisy,
    rdm_purity_depolarized,
    sre_exact,
    sre_nlm_depolarized,
    stabilizer_purity_exact,
)
from src.quantum.mitigation import calibration_from_counts, simulate_initialization_counts
from src.quantum.noise import synth_calibration_matrix
from src.quantum.qcore import partial_trace, purity
from src.quantum.rcm import (
    collect_dataset,
    estimate_purity,
    estimate_rdm_purity,
    estimate_renyi2_entropy,
    estimate_sre,
    estimate_stabilizer_purity,
    mitigate_dataset,
    sample_local_cliffords,
)
from src.services.responses import computation_error, error_response, unexpected_error, validation_error
from src.storage import ResultStorage

logger = logging.getLogger(__name__)


def nonlocal_from_rdm_estimate(
    p_a: EstimateWithError,
    p_total: float,
) -> Tuple[float, float, Optional[str]]:
    """
    Non-local magic from an estimated single-qubit reduced purity under global
    depolarizing with accumulated survival p_total.

    Estimates outside the attainable range are clamped to it and reported in the
    returned note. The error is the largest deviation of the value over the clamped
    centre ± (sampling error + clamp distance), so a clamped estimate keeps a
    non-zero error bar.
    """
    floor = rdm_purity_depolarized(0.5, p_total)
    ceiling = rdm_purity_depolarized(1.0, p_total)

    def clamp(x: float) -> float:
        return min(max(x, floor), ceiling)

    centre = clamp(p_a.mean)
    shift = abs(p_a.mean - centre)
    note = None
    if shift > 0.0:
        note = f"reduced purity {p_a.mean:.5f} outside [{floor:.5f}, {ceiling:.5f}], clamped"
        logger.warning("Reduced purity %.6f outside attainable range; clamped", p_a.mean)
    reach = p_a.sampling_error + shift
    value = nonlocal_magic_noisy(centre, p_total)
    low = nonlocal_magic_noisy(clamp(centre - reach), p_total)
    high = nonlocal_magic_noisy(clamp(centre + reach), p_total)
    return value, max(abs(high - value), abs(low - value)), note


def sigma_check(name: str, estimate: EstimateWithError, expected: float) -> ReportCheck:
    """Estimate against a reference within REPORT_SIGMA_MULTIPLIER sampling errors."""
    tolerance = REPORT_SIGMA_MULTIPLIER * estimate.sampling_error + IDENTITY_TOL
    return ReportCheck.compare(name, estimate.mean, expected, tolerance)


def _readout_matrix(noise: ScenarioNoise, num_qubits: int) -> Optional[CalibrationMatrix]:
    if noise.readout_lambda is not None:
        lam = CalibrationMatrix.from_json_list(noise.readout_lambda)
    elif noise.readout_eps is not None:
        if len(noise.readout_eps) != num_qubits:
            raise ScenarioError(
                f"readout_eps lists {len(noise.readout_eps)} qubit(s), circuit has {num_qubits}"
            )
        lam = synth_calibration_matrix(noise.readout_eps, noise.readout_correlation)
    else:
        return None
    if lam.num_qubits != num_qubits:
        raise ScenarioError(f"Readout matrix covers {lam.num_qubits} qubit(s), circuit has {num_qubits}")
    return lam


def _estimator_name(spec: EstimatorSpec) -> str:
    if spec.kind == EstimatorKind.RDM_PURITY:
        return "rdm_purity_" + "".join(str(q) for q in sorted(spec.keep))
    return spec.kind.value


def _estimate_and_oracle(spec: EstimatorSpec, ds: RcmDataset, rho: DensityMatrix) -> Tuple[EstimateWithError, float]:
    if spec.kind == EstimatorKind.PURITY:
        return estimate_purity(ds), purity(rho)
    if spec.kind == EstimatorKind.STAB_PURITY:
        return estimate_stabilizer_purity(ds), stabilizer_purity_exact(rho)
    if spec.kind == EstimatorKind.SRE:
        return estimate_sre(ds), sre_exact(rho)
    if spec.kind == EstimatorKind.RENYI2:
        return estimate_renyi2_entropy(ds), -math.log2(purity(rho))
    return estimate_rdm_purity(ds, spec.keep), purity(partial_trace(rho, spec.keep))


def build_scenario_report(scenario: Scenario) -> Tuple[Report, RcmDataset]:
    """Run the full simulated pipeline of one scenario."""
    if scenario.circuit is not None:
        circuit = scenario.circuit.to_circuit()
    else:
        circuit = paper_state(scenario.state, scenario.params_radians())
    n = circuit.num_qubits
    logger.info("Scenario '%s': %d qubit(s), %d CZ", scenario.name, n, circuit.count_cz())

    rho = run_circuit(circuit, NoiseConfig(p_dep_cz=scenario.noise.p_dep_cz))
    lam = _readout_matrix(scenario.noise, n)
    noise = NoiseConfig(
        p_dep_cz=scenario.noise.p_dep_cz,
        readout_lambda=lam,
        n_shot=scenario.n_shot,
        seed=scenario.seed,
    )
    n_rand = SINGLE_QUBIT_CLIFFORDS ** n if scenario.exhaustive else scenario.n_rand
    tuples = sample_local_cliffords(n, n_rand, scenario.seed)
    ds = collect_dataset(rho, tuples, noise, scenario.workers)

    notes: List[str] = []
    if scenario.mitigation.enabled:
        if lam is None:
            raise ScenarioError("Mitigation enabled but the scenario has no readout model")
        if scenario.mitigation.calibration_shots is not None:
            counts = simulate_initialization_counts(lam, scenario.mitigation.calibration_shots, scenario.seed + 1)
            lam = calibration_from_counts(counts)
            notes.append(f"mitigated with Λ estimated from {scenario.mitigation.calibration_shots} shots")
        ds = mitigate_dataset(ds, lam)

    p_total = scenario.noise.p_dep_cz ** circuit.count_cz()
    values: List[ReportValue] = []
    checks: List[ReportCheck] = []
    for spec in scenario.estimators:
        name = _estimator_name(spec)
        estimate, oracle = _estimate_and_oracle(spec, ds, rho)
        values.append(ReportValue(name=name, value=estimate.mean, error=estimate.sampling_error,
                                  provenance=Provenance.ESTIMATE))
        values.append(ReportValue(name=f"{name}_oracle", value=oracle, provenance=Provenance.ORACLE))
        checks.append(sigma_check(f"{name}_vs_oracle", estimate, oracle))

        if spec.kind == EstimatorKind.RDM_PURITY and n == 2 and len(spec.keep) == 1:
            nl, nl_error, note = nonlocal_from_rdm_estimate(estimate, p_total)
            values.append(ReportValue(name="m2_nonlocal_rdm", value=nl, error=nl_error,
                                      provenance=Provenance.ESTIMATE))
            if note:
                notes.append(note)
        if spec.kind == EstimatorKind.SRE and scenario.state == StateId.NLM:
            theta = scenario.params_radians().get("theta", math.pi / 4)
            theory = sre_nlm_depolarized(1.0 - p_total, theta)
            values.append(ReportValue(name="sre_theory", value=theory, provenance=Provenance.THEORY))
            checks.append(sigma_check("sre_vs_theory", estimate, theory))

    report = Report(
        name=scenario.name,
        parameters=scenario.model_dump(mode="json"),
        rows=[ReportRow(label=scenario.name, values=values, checks=checks, notes=notes)],
    )
    logger.info("Scenario '%s' finished: %s", scenario.name, "pass" if report.passed else "FAIL")
    return report, ds


class RcmService:
    """
    Service for running RCM scenarios and keeping their datasets and reports.
    """

    def __init__(self, datasets: ResultStorage[RcmDataset], reports: ResultStorage[Report]):
        """
        Initialize RcmService.

        Args:
            datasets: Storage for collected datasets
            reports: Storage for scenario reports
        """
        self.datasets = datasets
        self.reports = reports
        self.loader = ScenarioLoader()

    async def load_scenario(self, source: str) -> Tuple[Optional[Scenario], Optional[Dict[str, Any]]]:
        """
        Load and validate a scenario from a path or URL.

        Returns:
            Tuple of (scenario, error_dict)
        """
        try:
            doc = await self.loader.load(source)
            is_valid, error_message = self.loader.validate_document(doc)
            if not is_valid:
                return None, error_response(error_message)
            return Scenario.model_validate(doc), None
        except httpx.HTTPError as e:
            return None, error_response(ERROR_FETCH_FAILED.format(detail=str(e)))
        except (json.JSONDecodeError, yaml.YAMLError, OSError) as e:
            return None, error_response(ERROR_PARSE_FAILED.format(detail=str(e)))
        except MagicSimError as e:
            return None, computation_error(e)
        except ValidationError as e:
            return None, validation_error(e)

    def run_scenario(self, scenario: Scenario) -> Dict[str, Any]:
        """
        Run a scenario and store its dataset and report under the scenario name.

        Returns:
            Report dictionary with the overall pass flag
        """
        try:
            report, ds = build_scenario_report(scenario)
        except MagicSimError as e:
            response = computation_error(e)
            response["scenario"] = scenario.name
            return response
        except ValidationError as e:
            response = validation_error(e)
            response["scenario"] = scenario.name
            return response
        except Exception as e:
            return unexpected_error(e)
        self.datasets.add(scenario.name, ds)
        self.reports.add(scenario.name, report)
        return {
            "status": "success",
            "name": scenario.name,
            "passed": report.passed,
            "n_samples": ds.n_samples,
            "report": report.model_dump(mode="json"),
        }

    async def run_scenario_source(self, source: str) -> Dict[str, Any]:
        scenario, error = await self.load_scenario(source)
        if error:
            return error
        return self.run_scenario(scenario)

    def list_datasets(self) -> Dict[str, Any]:
        datasets = [
            {"name": name, "num_qubits": ds.num_qubits, "n_samples": ds.n_samples,
             "n_shot": ds.n_shot, "mitigated": ds.mitigated}
            for name, ds in sorted(self.datasets.list_all().items())
        ]
        return {"count": len(datasets), "datasets": datasets}

    def export_dataset(self, name: str) -> Dict[str, Any]:
        """
        Serialized dataset for re-analysis without re-simulation.

        Returns:
            Dataset as JSON-ready dictionary
        """
        ds, error = self.datasets.get_or_error(name)
        if error:
            return error
        return ds.model_dump(mode="json")
