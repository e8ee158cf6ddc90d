import logging

import pytest

from src.config import (
    ERROR_REPORT_NOT_FOUND,
    FIG4_ANCHOR,
    REPORT_SIGMA_MULTIPLIER,
    TABLE1_ANCHORS,
    TABLE1_MAGIC_TOL,
    TABLE1_PURITY_TOL,
    TABLE1_TARGET_PURITY,
)
from src.errors import DomainError, InconsistencyError
from src.models.estimates import EstimateWithError
from src.models.report import Report, ReportCheck
from src.quantum.magic import nonlocal_magic_noisy, rdm_purity_depolarized
from src.services.rcm_service import nonlocal_from_rdm_estimate
from src.services.report_service import ReportService, build_fig3, build_fig4, build_table1
from src.storage import ResultStorage
from src.utils.serialization import render_report, write_report
from tests.conftest import T_PLUS_M2


@pytest.fixture(scope="module")
def fig4_report() -> Report:
    return build_fig4()


@pytest.fixture(scope="module")
def exact_table1() -> Report:
    return build_table1(exhaustive=True, n_shot=None)


class TestFig4:
    def test_passes(self, fig4_report):
        assert fig4_report.passed

    def test_landscape_values(self, fig4_report):
        row = fig4_report.row("M")
        assert row.value("landscape_min").value == pytest.approx(FIG4_ANCHOR, abs=0.01)
        assert row.value("landscape_min_noise_free").value == pytest.approx(0.19265, abs=1e-4)
        assert row.value("optimizer_residual_noise_free").value == pytest.approx(0.0, abs=1e-6)

    def test_curve_has_full_grid(self, fig4_report):
        lines = fig4_report.curve_csv.strip().split("\n")
        assert len(lines) == 1 + 49 * 49

    def test_noise_free_fails_anchor(self):
        report = build_fig4(p_dep=1.0)
        assert not report.passed
        failed = [c.name for c in report.row("M").checks if not c.passed]
        assert failed == ["landscape_min_vs_anchor"]


class TestFig3:
    def test_exhaustive_noise_free(self):
        report = build_fig3([0.0, 22.5, 45.0], p_dep=1.0, exhaustive=True, n_shot=None)
        assert report.passed
        assert [row.label for row in report.rows] == ["theta=0", "theta=22.5", "theta=45"]
        assert report.row("theta=45").value("m2_nonlocal_rdm").value == pytest.approx(T_PLUS_M2, abs=1e-6)
        assert report.row("theta=0").value("m2").value == pytest.approx(0.0, abs=1e-9)
        assert report.curve_csv.startswith("theta_deg,m2,m2_error,m2_theory,")

    def test_theta_range(self):
        with pytest.raises(DomainError):
            build_fig3([50.0], p_dep=1.0, exhaustive=True, n_shot=None)

    def test_survival_range(self):
        with pytest.raises(DomainError):
            build_fig3([10.0], p_dep=0.0)

    def test_sampled_sweep_tracks_theory(self):
        within = 0
        nonlocal_misses = 0
        for seed in range(20):
            report = build_fig3(seed=seed)
            within += all(row.check("m2_vs_theory").passed for row in report.rows)
            for row in report.rows:
                assert row.value("m2_nonlocal_rdm").error > 0.0
                nonlocal_misses += not row.check("m2_nonlocal_rdm_vs_theory").passed
        assert within >= 19
        assert nonlocal_misses <= 4


class TestNonlocalFromRdm:
    def test_in_range_estimate(self):
        estimate = EstimateWithError.from_sampling_error(0.9, 0.0, 400)
        value, error, note = nonlocal_from_rdm_estimate(estimate, 1.0)
        assert value == pytest.approx(nonlocal_magic_noisy(0.9, 1.0))
        assert error == 0.0
        assert note is None

    def test_estimate_above_ceiling_keeps_error_bar(self, caplog):
        estimate = EstimateWithError.from_sampling_error(1.004, 0.01, 400)
        with caplog.at_level(logging.WARNING, logger="src.services.rcm_service"):
            value, error, note = nonlocal_from_rdm_estimate(estimate, 1.0)
        assert value == pytest.approx(0.0, abs=1e-12)
        assert error == pytest.approx(nonlocal_magic_noisy(0.986, 1.0), rel=1e-9)
        assert error > 0.03
        assert "clamped" in note
        assert "clamped" in caplog.text

    def test_estimate_below_floor_keeps_error_bar(self):
        p_dep = 0.9
        floor = rdm_purity_depolarized(0.5, p_dep)
        estimate = EstimateWithError.from_sampling_error(floor - 0.002, 0.01, 400)
        value, error, _ = nonlocal_from_rdm_estimate(estimate, p_dep)
        assert value == pytest.approx(0.0, abs=1e-12)
        assert error == pytest.approx(nonlocal_magic_noisy(floor + 0.012, p_dep), rel=1e-9)
        assert error > 0.0


class TestTable1:
    def test_exhaustive_passes(self, exact_table1):
        assert exact_table1.passed
        assert [row.label for row in exact_table1.rows] == list(TABLE1_ANCHORS)

    def test_exhaustive_matches_oracle(self, exact_table1):
        for row in exact_table1.rows:
            assert row.value("m2").value == pytest.approx(row.value("m2_oracle").value, abs=1e-9)
            assert row.value("purity").value == pytest.approx(0.94, abs=1e-9)

    def test_oracle_values(self, exact_table1):
        expected = {"LM": 0.4816, "LM_erased": 0.0873, "M": 0.4535, "M_erased": 0.271}
        for label, value in expected.items():
            assert exact_table1.row(label).value("m2_oracle").value == pytest.approx(value, abs=1e-3)

    @pytest.mark.parametrize("seed", range(5))
    def test_default_sampling_meets_anchors(self, seed):
        report = build_table1(seed=seed)
        for row in report.rows:
            m2 = row.value("m2")
            assert abs(m2.value - row.value("m2_oracle").value) <= REPORT_SIGMA_MULTIPLIER * m2.error
            assert m2.value == pytest.approx(row.value("m2_anchor").value, abs=TABLE1_MAGIC_TOL)
            assert row.value("purity").value == pytest.approx(TABLE1_TARGET_PURITY, abs=TABLE1_PURITY_TOL)
            assert {"m2_vs_anchor", "purity_vs_anchor"} <= {c.name for c in row.checks}

    def test_same_seed_same_bytes(self):
        first = build_table1(seed=3, n_rand=40, n_shot=500, workers=1)
        second = build_table1(seed=3, n_rand=40, n_shot=500, workers=2)
        assert first.to_json() == second.to_json()


class TestReportModel:
    def test_inconsistent_flag(self):
        with pytest.raises(InconsistencyError):
            ReportCheck(name="x", observed=1.0, expected=0.0, tolerance=0.1, passed=True)

    def test_compare(self):
        assert ReportCheck.compare("x", 1.0, 1.05, 0.1).passed
        assert not ReportCheck.compare("x", 1.0, 1.5, 0.1).passed

    def test_text_rendering(self, fig4_report):
        text = render_report(fig4_report, "text")
        assert text.startswith("Report fig4")
        assert text.rstrip().endswith("PASSED")
        assert "landscape_min_vs_anchor" in text

    def test_csv_falls_back_to_json(self, exact_table1):
        assert render_report(exact_table1, "csv") == exact_table1.to_json()

    def test_write_report(self, fig4_report, tmp_path):
        written = write_report(fig4_report, str(tmp_path / "out"))
        assert sorted(p.name for p in written) == ["fig4.csv", "fig4.json", "fig4.txt"]
        assert all(p.exists() for p in written)


class TestReportService:
    def test_build_and_fetch(self):
        service = ReportService(ResultStorage(ERROR_REPORT_NOT_FOUND))
        result = service.report_fig3([10.0], p_dep=1.0, exhaustive=True, n_shot=None)
        assert result["passed"] is True
        assert service.list_reports() == {"count": 1, "reports": [{"name": "fig3", "passed": True, "rows": 1}]}
        assert service.get_report("fig3", "csv")["csv"].startswith("theta_deg")
        assert service.get_report("fig3")["name"] == "fig3"

    def test_table1_through_service(self):
        service = ReportService(ResultStorage(ERROR_REPORT_NOT_FOUND))
        result = service.report_table1(exhaustive=True, n_shot=None)
        assert result["passed"] is True
        assert result["report"]["parameters"]["exhaustive"] is True
        assert service.get_report("table1", "csv") == {"name": "table1", "csv": ""}

    def test_errors_become_dicts(self):
        service = ReportService(ResultStorage(ERROR_REPORT_NOT_FOUND))
        assert service.report_fig3([60.0])["error"] is True
        missing = service.get_report("table1")
        assert missing["error"] is True
        assert "Available reports: none" in missing["message"]
