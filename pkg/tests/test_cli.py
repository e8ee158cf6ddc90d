import json
import logging

import pytest
import yaml

from main import HealthCheckFilter, main
from src.config import EXIT_CHECK_FAILED, EXIT_ERROR, EXIT_OK
from tests.conftest import T_PLUS_M2


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


class TestMagicCommand:
    def test_exact(self, capsys):
        code, out = run(capsys, "magic", "exact", "--state", "NLM", "--param", "theta=45")
        assert code == EXIT_OK
        result = json.loads(out)
        assert result["m2"] == pytest.approx(T_PLUS_M2, abs=1e-10)
        assert result["params_deg"] == {"theta": 45.0}

    def test_unknown_state(self, capsys):
        code, out = run(capsys, "magic", "exact", "--state", "Psi9")
        assert code == EXIT_ERROR
        assert json.loads(out)["error"] is True

    def test_malformed_param(self, capsys):
        code, out = run(capsys, "magic", "exact", "--state", "NLM", "--param", "theta")
        assert code == EXIT_ERROR
        assert "name=value" in json.loads(out)["message"]

    def test_missing_subcommand(self):
        with pytest.raises(SystemExit):
            main(["magic"])


class TestRcmCommand:
    def test_yaml_scenario_with_out_dir(self, capsys, tmp_path):
        scenario = tmp_path / "lm.yaml"
        scenario.write_text(yaml.safe_dump({
            "name": "lm-cli",
            "state": "LM",
            "estimators": [{"kind": "sre"}],
            "n_rand": 20,
            "n_shot": None,
        }), encoding="utf-8")
        out_dir = tmp_path / "out"
        code, out = run(capsys, "rcm", "estimate", "--scenario", str(scenario), "--exhaustive",
                        "--out", str(out_dir))
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["name"] == "lm-cli"
        assert report["parameters"]["exhaustive"] is True
        assert sorted(p.name for p in out_dir.iterdir()) == ["lm-cli.json", "lm-cli.txt"]

    def test_missing_file(self, capsys, tmp_path):
        code, out = run(capsys, "rcm", "estimate", "--scenario", str(tmp_path / "none.yaml"))
        assert code == EXIT_ERROR
        assert json.loads(out)["error"] is True


class TestMitigateCommand:
    def test_with_matrix(self, capsys, tmp_path):
        calibration = tmp_path / "cal.json"
        calibration.write_text(json.dumps({"lambda": [[0.9, 0.1], [0.1, 0.9]]}), encoding="utf-8")
        code, out = run(capsys, "mitigate", "--probs", "0.9,0.1", "--calibration", str(calibration))
        assert code == EXIT_OK
        assert json.loads(out)["probs"] == pytest.approx([1.0, 0.0], abs=1e-9)

    def test_with_counts(self, capsys, tmp_path):
        calibration = tmp_path / "cal.yaml"
        calibration.write_text("counts: [[4750, 250], [250, 4750]]\nn_shot: 5000\n", encoding="utf-8")
        code, out = run(capsys, "mitigate", "--probs", "0.5,0.5", "--calibration", str(calibration))
        assert code == EXIT_OK
        assert json.loads(out)["readout_fidelity"] == pytest.approx(0.95)

    def test_bad_probabilities(self, capsys, tmp_path):
        calibration = tmp_path / "cal.json"
        calibration.write_text(json.dumps({"lambda": [[1.0, 0.0], [0.0, 1.0]]}), encoding="utf-8")
        code, _ = run(capsys, "mitigate", "--probs", "0.9,0.9", "--calibration", str(calibration))
        assert code == EXIT_ERROR


class TestFitCommand:
    def _write_curve(self, path, p):
        rows = "\n".join(f"{n},{0.5 * p ** n + 0.45}" for n in (1, 10, 20, 50, 100, 200))
        path.write_text("n_cliffords,survival\n" + rows + "\n", encoding="utf-8")

    def test_reference_and_interleaved(self, capsys, tmp_path):
        self._write_curve(tmp_path / "ref.csv", 0.986)
        self._write_curve(tmp_path / "irb.csv", 0.96)
        code, out = run(capsys, "fit", "rb", "--curve", str(tmp_path / "ref.csv"),
                        "--interleaved", str(tmp_path / "irb.csv"), "--dim", "4")
        assert code == EXIT_OK
        assert json.loads(out)["f_gate"] == pytest.approx(0.980223, abs=1e-5)

    def test_length_mismatch(self, capsys, tmp_path):
        self._write_curve(tmp_path / "ref.csv", 0.99)
        (tmp_path / "irb.csv").write_text("n_cliffords,survival\n1,0.9\n2,0.8\n3,0.7\n4,0.6\n", encoding="utf-8")
        code, _ = run(capsys, "fit", "rb", "--curve", str(tmp_path / "ref.csv"),
                      "--interleaved", str(tmp_path / "irb.csv"))
        assert code == EXIT_ERROR


class TestEraseCommand:
    def test_sweep_csv(self, capsys):
        code, out = run(capsys, "erase", "sweep", "--state", "M", "--step", "90", "--format", "csv")
        assert code == EXIT_OK
        lines = out.strip().split("\n")
        assert lines[0] == "gamma_deg,phi_deg,m2"
        assert len(lines) == 1 + 5 * 5

    def test_optimize_single_qubit(self, capsys):
        code, _ = run(capsys, "erase", "optimize", "--state", "Psi1")
        assert code == EXIT_ERROR


class TestReportCommand:
    def test_fig3_text(self, capsys):
        code, out = run(capsys, "report", "fig3", "--theta", "0,45", "--p-dep", "1", "--exhaustive",
                        "--format", "text")
        assert code == EXIT_OK
        assert out.startswith("Report fig3")
        assert "PASSED" in out

    def test_fig4_without_noise_fails_checks(self, capsys):
        code, out = run(capsys, "report", "fig4", "--p-dep", "1", "--step", "7.5")
        assert code == EXIT_CHECK_FAILED
        assert json.loads(out)["name"] == "fig4"

    def test_bad_theta(self, capsys):
        code, out = run(capsys, "report", "fig3", "--theta", "80", "--exhaustive")
        assert code == EXIT_ERROR
        assert "DomainError" in json.loads(out)["message"]


class TestHealthCheckFilter:
    def test_drops_health_probes(self):
        record = logging.LogRecord("uvicorn.access", logging.INFO, "", 0, "%s %s %s", ("ip", "GET", "/health"), None)
        assert not HealthCheckFilter().filter(record)
        record.args = ("ip", "GET", "/mcp")
        assert HealthCheckFilter().filter(record)
