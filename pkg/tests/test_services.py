import asyncio
import json
import math

import pytest
import yaml
from pydantic import ValidationError

from src.config import ERROR_DATASET_NOT_FOUND, ERROR_REPORT_NOT_FOUND
from src.errors import ScenarioError
from src.loaders.scenario_loader import ScenarioLoader
from src.models.estimates import RcmDataset
from src.models.report import Report
from src.models.scenario import Scenario
from src.services.benchmark_service import BenchmarkService
from src.services.erasure_service import ErasureService
from src.services.magic_service import MagicService
from src.services.mitigation_service import MitigationService
from src.services.rcm_service import RcmService
from src.storage import ResultStorage
from tests.conftest import T_PLUS_M2


def value_of(report: dict, name: str) -> float:
    for item in report["rows"][0]["values"]:
        if item["name"] == name:
            return item["value"]
    raise KeyError(name)


def lm_scenario(**overrides) -> dict:
    doc = {
        "name": "lm-exact",
        "state": "LM",
        "estimators": [{"kind": "sre"}, {"kind": "purity"}],
        "exhaustive": True,
        "n_shot": None,
    }
    doc.update(overrides)
    return doc


@pytest.fixture
def datasets() -> ResultStorage[RcmDataset]:
    return ResultStorage(ERROR_DATASET_NOT_FOUND)


@pytest.fixture
def rcm_service(datasets) -> RcmService:
    return RcmService(datasets, ResultStorage[Report](ERROR_REPORT_NOT_FOUND))


class TestScenarioLoader:
    def test_parse_json_and_yaml(self):
        assert ScenarioLoader.parse_text('{"name": "a"}', "s.json") == {"name": "a"}
        assert ScenarioLoader.parse_text("name: a\nseed: 3\n", "s.yaml") == {"name": "a", "seed": 3}

    def test_sniffs_format_without_extension(self):
        assert ScenarioLoader.parse_text("name: b\n") == {"name": "b"}
        assert ScenarioLoader.parse_text('{"name": "b"}') == {"name": "b"}

    def test_is_url(self):
        assert ScenarioLoader.is_url("https://example.org/s.yaml")
        assert not ScenarioLoader.is_url("scenarios/s.yaml")

    def test_validate_document(self):
        assert ScenarioLoader.validate_document(lm_scenario()) == (True, "")
        ok, message = ScenarioLoader.validate_document(["not", "a", "mapping"])
        assert not ok and "mapping" in message
        ok, message = ScenarioLoader.validate_document({"name": "x", "estimators": [], "schema_version": 2})
        assert not ok and "schema version 2" in message
        ok, message = ScenarioLoader.validate_document({"name": "x"})
        assert not ok and "estimators" in message


class TestScenarioModel:
    def test_needs_exactly_one_preparation(self):
        with pytest.raises(ScenarioError):
            Scenario.model_validate({"name": "x", "estimators": [{"kind": "sre"}]})

    def test_rdm_purity_needs_keep(self):
        with pytest.raises(ScenarioError):
            Scenario.model_validate(lm_scenario(estimators=[{"kind": "rdm_purity"}]))

    def test_one_readout_source(self):
        noise = {"readout_eps": [[0.01, 0.01]] * 2, "readout_lambda": [[1, 0, 0, 0]] * 4}
        with pytest.raises(ScenarioError):
            Scenario.model_validate(lm_scenario(noise=noise))

    def test_schema_version(self):
        with pytest.raises(ScenarioError):
            Scenario.model_validate(lm_scenario(schema_version=7))

    def test_pydantic_range_errors(self):
        with pytest.raises(ValidationError):
            Scenario.model_validate(lm_scenario(noise={"p_dep_cz": 0.0}))

    def test_angles_are_degrees(self):
        scenario = Scenario.model_validate(lm_scenario(state="NLM", params_deg={"theta": 90.0}))
        assert scenario.params_radians()["theta"] == pytest.approx(math.pi / 2)


class TestRcmService:
    def test_load_scenario_from_file(self, rcm_service, tmp_path):
        path = tmp_path / "lm.yaml"
        path.write_text(yaml.safe_dump(lm_scenario()), encoding="utf-8")
        scenario, error = asyncio.run(rcm_service.load_scenario(str(path)))
        assert error is None
        assert scenario.name == "lm-exact"

    def test_load_scenario_reports_parse_errors(self, rcm_service, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        scenario, error = asyncio.run(rcm_service.load_scenario(str(path)))
        assert scenario is None
        assert error["error"] is True

    def test_load_missing_file(self, rcm_service, tmp_path):
        _, error = asyncio.run(rcm_service.load_scenario(str(tmp_path / "missing.yaml")))
        assert error["error"] is True

    def test_exhaustive_noise_free_lm(self, rcm_service):
        result = rcm_service.run_scenario(Scenario.model_validate(lm_scenario()))
        assert result["status"] == "success"
        assert result["passed"] is True
        assert result["n_samples"] == 576
        assert value_of(result["report"], "sre") == pytest.approx(T_PLUS_M2, abs=1e-9)
        assert value_of(result["report"], "purity") == pytest.approx(1.0, abs=1e-10)

    def test_nonlocal_magic_from_reduced_purity(self, rcm_service):
        doc = lm_scenario(
            name="nlm",
            state="NLM",
            params_deg={"theta": 45.0},
            estimators=[{"kind": "rdm_purity", "keep": [0]}, {"kind": "sre"}],
        )
        result = rcm_service.run_scenario(Scenario.model_validate(doc))
        assert result["passed"] is True
        assert value_of(result["report"], "m2_nonlocal_rdm") == pytest.approx(T_PLUS_M2, abs=1e-6)
        assert value_of(result["report"], "sre_theory") == pytest.approx(T_PLUS_M2, abs=1e-10)

    def test_mitigated_readout(self, rcm_service):
        doc = lm_scenario(
            name="bell-mitigated",
            state="Psi4",
            noise={"readout_eps": [[0.04, 0.04], [0.04, 0.04]]},
            mitigation={"enabled": True},
        )
        result = rcm_service.run_scenario(Scenario.model_validate(doc))
        assert result["passed"] is True
        assert value_of(result["report"], "sre") == pytest.approx(0.0, abs=1e-6)
        assert rcm_service.list_datasets()["datasets"][0]["mitigated"] is True

    def test_mitigation_needs_readout_model(self, rcm_service):
        result = rcm_service.run_scenario(Scenario.model_validate(lm_scenario(mitigation={"enabled": True})))
        assert result["error"] is True
        assert result["scenario"] == "lm-exact"
        assert "ScenarioError" in result["message"]

    def test_readout_size_mismatch(self, rcm_service):
        doc = lm_scenario(noise={"readout_eps": [[0.01, 0.01]]})
        result = rcm_service.run_scenario(Scenario.model_validate(doc))
        assert result["error"] is True

    def test_custom_circuit(self, rcm_service):
        doc = lm_scenario(name="custom")
        del doc["state"]
        doc["circuit"] = {"num_qubits": 1, "gates": [{"kind": "H", "qubits": [0]}, {"kind": "T", "qubits": [0]}]}
        result = rcm_service.run_scenario(Scenario.model_validate(doc))
        assert value_of(result["report"], "sre") == pytest.approx(T_PLUS_M2, abs=1e-9)

    def test_datasets_are_stored_and_exported(self, rcm_service):
        rcm_service.run_scenario(Scenario.model_validate(lm_scenario()))
        listing = rcm_service.list_datasets()
        assert listing["count"] == 1
        assert listing["datasets"][0]["name"] == "lm-exact"
        exported = rcm_service.export_dataset("lm-exact")
        assert RcmDataset.model_validate(exported).n_samples == 576
        json.dumps(exported)

    def test_unknown_dataset(self, rcm_service):
        result = rcm_service.export_dataset("nope")
        assert result["error"] is True
        assert "Available datasets: none" in result["message"]

    def test_run_from_source(self, rcm_service, tmp_path):
        path = tmp_path / "lm.json"
        path.write_text(json.dumps(lm_scenario()), encoding="utf-8")
        result = asyncio.run(rcm_service.run_scenario_source(str(path)))
        assert result["passed"] is True


class TestMagicService:
    def test_lm(self):
        result = MagicService().magic_exact("LM")
        assert result["m2"] == pytest.approx(T_PLUS_M2, abs=1e-10)
        assert result["cz_count"] == 1
        assert result["rdm_purity"] == pytest.approx(0.5)

    def test_nlm_in_degrees(self):
        result = MagicService().magic_exact("NLM", {"theta": 45.0})
        assert result["m2_nonlocal"] == pytest.approx(T_PLUS_M2, abs=1e-10)
        assert result["schmidt_lambda"] == pytest.approx(math.cos(math.pi / 8) ** 2)

    def test_unknown_state(self):
        result = MagicService().magic_exact("Psi9")
        assert result["error"] is True
        assert "Available states" in result["message"]

    def test_domain_error_is_reported(self):
        result = MagicService().magic_exact("LM", p_dep_cz=1.5)
        assert result["error"] is True


class TestErasureService:
    def test_sweep(self):
        result = ErasureService().sweep("M", step_deg=7.5)
        assert result["minimum"] == pytest.approx(0.19265, abs=1e-4)
        assert result["gamma_deg"] == pytest.approx(67.5)
        assert result["csv"].startswith("gamma_deg,phi_deg,m2\n")

    def test_bad_step(self):
        assert ErasureService().sweep("M", step_deg=0.0)["error"] is True

    def test_single_qubit_state(self):
        assert ErasureService().optimize("Psi1")["error"] is True

    def test_optimize_bell(self):
        result = ErasureService().optimize("Psi4")
        assert result["residual_m2"] == pytest.approx(0.0, abs=1e-8)
        assert result["m2_nonlocal_schmidt"] == pytest.approx(0.0, abs=1e-12)


class TestMitigationService:
    def test_calibrate(self):
        result = MitigationService(ResultStorage(ERROR_DATASET_NOT_FOUND)).calibrate(
            [[4750, 250], [250, 4750]], 5000)
        assert result["lambda"] == [[0.95, 0.05], [0.05, 0.95]]
        assert result["readout_fidelity"] == pytest.approx(0.95)

    def test_mitigate_with_matrix(self):
        service = MitigationService(ResultStorage(ERROR_DATASET_NOT_FOUND))
        result = service.mitigate([0.9, 0.1], lambda_rows=[[0.9, 0.1], [0.1, 0.9]])
        assert result["probs"] == pytest.approx([1.0, 0.0], abs=1e-9)

    def test_mitigate_with_counts(self):
        service = MitigationService(ResultStorage(ERROR_DATASET_NOT_FOUND))
        result = service.mitigate([0.5, 0.5], counts=[[90, 10], [10, 90]], n_shot=100)
        assert result["probs"] == pytest.approx([0.5, 0.5], abs=1e-9)

    def test_needs_calibration(self):
        service = MitigationService(ResultStorage(ERROR_DATASET_NOT_FOUND))
        assert service.mitigate([0.5, 0.5])["error"] is True

    def test_bad_counts(self):
        service = MitigationService(ResultStorage(ERROR_DATASET_NOT_FOUND))
        assert service.calibrate([[90, 5], [10, 90]], 100)["error"] is True

    def test_stored_dataset(self, rcm_service, datasets):
        doc = lm_scenario(name="bell", state="Psi4", noise={"readout_eps": [[0.04, 0.04]] * 2})
        rcm_service.run_scenario(Scenario.model_validate(doc))
        service = MitigationService(datasets)
        lam = [[0.9216, 0.0384, 0.0384, 0.0016], [0.0384, 0.9216, 0.0016, 0.0384],
               [0.0384, 0.0016, 0.9216, 0.0384], [0.0016, 0.0384, 0.0384, 0.9216]]
        result = service.mitigate_dataset("bell", lam)
        assert result == {"status": "success", "name": "bell_mitigated", "n_samples": 576}
        assert datasets.get("bell_mitigated").mitigated
        assert service.mitigate_dataset("missing", lam)["error"] is True


class TestBenchmarkService:
    CURVE_N = [1, 10, 20, 50, 100, 200]

    def _survival(self, p: float):
        return [0.5 * p ** n + 0.45 for n in self.CURVE_N]

    def test_reference_fit(self):
        result = BenchmarkService().fit_rb(self.CURVE_N, self._survival(0.99), d=2)
        assert result["reference"]["p"] == pytest.approx(0.99, abs=1e-8)
        assert result["f_clifford"] == pytest.approx(0.995, abs=1e-8)
        assert "f_gate" not in result

    def test_interleaved_fit(self):
        result = BenchmarkService().fit_rb(self.CURVE_N, self._survival(0.986), 4, self._survival(0.96))
        assert result["f_gate"] == pytest.approx(0.980223, abs=1e-5)
        assert result["statistical_fluctuation"] is False

    def test_fluctuation_flag(self):
        result = BenchmarkService().fit_rb(self.CURVE_N, self._survival(0.95), 4, self._survival(0.96))
        assert result["statistical_fluctuation"] is True

    def test_constant_data(self):
        result = BenchmarkService().fit_rb(self.CURVE_N, [0.5] * 6)
        assert result["error"] is True
        assert "UnidentifiableFitError" in result["message"]

    def test_crosstalk(self):
        result = BenchmarkService().crosstalk(0.1, 60.0, 50.0, 120.0)
        assert result["percent"] == pytest.approx(0.1)
