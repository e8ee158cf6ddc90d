"""
Command-line front end

Subcommands mirror the MCP tools: every handler calls the same service method and
prints its result. Reports are rendered as JSON, CSV or an aligned text table.
"""

import argparse
import asyncio
import json
import logging
import sys
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence

import httpx
import yaml

from src.config import (
    DEFAULT_HTTP_HOST,
    DEFAULT_HTTP_PORT,
    DEFAULT_N_RAND,
    DEFAULT_N_SHOT,
    ERROR_DATASET_NOT_FOUND,
    ERROR_FETCH_FAILED,
    ERROR_PARSE_FAILED,
    ERROR_REPORT_NOT_FOUND,
    EXIT_CHECK_FAILED,
    EXIT_ERROR,
    EXIT_OK,
    FIG4_GRID_STEP_DEG,
    FIG4_P_DEP_CZ,
)
from src.errors import MagicSimError
from src.loaders.scenario_loader import ScenarioLoader
from src.models.estimates import RcmDataset
from src.models.report import Report
from src.quantum.benchfit import load_decay_curve
from src.services.benchmark_service import BenchmarkService
from src.services.erasure_service import ErasureService
from src.services.magic_service import MagicService
from src.services.mitigation_service import MitigationService
from src.services.rcm_service import RcmService
from src.services.report_service import ReportService
from src.services.responses import computation_error, error_response
from src.storage import ResultStorage
from src.utils.serialization import render_report, to_json, write_report

logger = logging.getLogger(__name__)


@dataclass
class Services:
    """Storages and services shared by the CLI and the MCP server."""

    datasets: ResultStorage[RcmDataset]
    reports: ResultStorage[Report]
    magic: MagicService
    rcm: RcmService
    mitigation: MitigationService
    erasure: ErasureService
    benchmark: BenchmarkService
    report: ReportService


def build_services() -> Services:
    datasets: ResultStorage[RcmDataset] = ResultStorage(ERROR_DATASET_NOT_FOUND)
    reports: ResultStorage[Report] = ResultStorage(ERROR_REPORT_NOT_FOUND)
    return Services(
        datasets=datasets,
        reports=reports,
        magic=MagicService(),
        rcm=RcmService(datasets, reports),
        mitigation=MitigationService(datasets),
        erasure=ErasureService(),
        benchmark=BenchmarkService(),
        report=ReportService(reports),
    )


def _parse_params(items: Optional[Sequence[str]]) -> Dict[str, float]:
    """--param theta=45 --param t=1 -> {"theta": 45.0, "t": 1.0}"""
    params: Dict[str, float] = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"Parameter '{item}' is not of the form name=value")
        params[key.strip()] = float(value)
    return params


def _parse_floats(text: str) -> List[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _load_document(source: str) -> Dict[str, Any]:
    return ScenarioLoader.parse_text(ScenarioLoader.read_text(source), source)


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _finish_result(result: Dict[str, Any]) -> int:
    _emit(to_json(result))
    return EXIT_ERROR if result.get("error") else EXIT_OK


def _finish_report(result: Dict[str, Any], services: Services, args: argparse.Namespace) -> int:
    """Render a stored report; exit code reflects its acceptance flags."""
    if result.get("error"):
        _emit(to_json(result))
        return EXIT_ERROR
    report = services.reports.get(result["name"])
    if args.out:
        for path in write_report(report, args.out):
            logger.info("Wrote %s", path)
    _emit(render_report(report, args.format))
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def _cmd_magic_exact(args: argparse.Namespace, services: Services) -> int:
    result = services.magic.magic_exact(args.state, _parse_params(args.param), args.p_dep)
    return _finish_result(result)


def _cmd_rcm_estimate(args: argparse.Namespace, services: Services) -> int:
    scenario, error = asyncio.run(services.rcm.load_scenario(args.scenario))
    if error:
        return _finish_result(error)
    overrides: Dict[str, Any] = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.exhaustive:
        overrides["exhaustive"] = True
    if args.workers is not None:
        overrides["workers"] = args.workers
    if overrides:
        scenario = scenario.model_copy(update=overrides)
    return _finish_report(services.rcm.run_scenario(scenario), services, args)


def _cmd_mitigate(args: argparse.Namespace, services: Services) -> int:
    calibration = _load_document(args.calibration)
    if not isinstance(calibration, dict):
        return _finish_result(error_response(ERROR_PARSE_FAILED.format(detail="calibration must be a mapping")))
    probs = _parse_floats(args.probs)
    if "counts" in calibration:
        result = services.mitigation.mitigate(probs, counts=calibration["counts"], n_shot=calibration.get("n_shot"))
    else:
        result = services.mitigation.mitigate(probs, lambda_rows=calibration.get("lambda"))
    return _finish_result(result)


def _cmd_erase_sweep(args: argparse.Namespace, services: Services) -> int:
    result = services.erasure.sweep(args.state, _parse_params(args.param), args.p_dep, args.step)
    if args.format == "csv" and not result.get("error"):
        _emit(result["csv"])
        return EXIT_OK
    return _finish_result(result)


def _cmd_erase_optimize(args: argparse.Namespace, services: Services) -> int:
    result = services.erasure.optimize(args.state, _parse_params(args.param), args.p_dep, args.seed or 0)
    return _finish_result(result)


def _cmd_fit_rb(args: argparse.Namespace, services: Services) -> int:
    reference = load_decay_curve(ScenarioLoader.read_text(args.curve))
    interleaved = None
    if args.interleaved:
        interleaved_curve = load_decay_curve(ScenarioLoader.read_text(args.interleaved))
        if interleaved_curve.n_cliffords != reference.n_cliffords:
            return _finish_result(error_response("Reference and interleaved curves need the same sequence lengths"))
        interleaved = interleaved_curve.survival
    result = services.benchmark.fit_rb(reference.n_cliffords, reference.survival, args.dim, interleaved)
    return _finish_result(result)


def _sampling_options(args: argparse.Namespace) -> Dict[str, Any]:
    options: Dict[str, Any] = {"n_rand": args.n_rand, "n_shot": args.n_shot, "workers": args.workers or 1}
    if args.exhaustive:
        options.update(exhaustive=True, n_shot=None)
    return options


def _cmd_report(args: argparse.Namespace, services: Services) -> int:
    seed = args.seed or 0
    if args.which == "table1":
        result = services.report.report_table1(args.p_dep, seed, **_sampling_options(args))
    elif args.which == "fig3":
        grid = _parse_floats(args.theta) if args.theta else None
        result = services.report.report_fig3(grid, args.p_dep, seed, **_sampling_options(args))
    else:
        p_dep = FIG4_P_DEP_CZ if args.p_dep is None else args.p_dep
        result = services.report.report_fig4(p_dep, args.step, seed)
    return _finish_report(result, services, args)


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("json", "csv", "text"), default="json", help="Output format")
    parser.add_argument("--out", help="Directory receiving <name>.json/.txt/.csv")


def _add_state_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--state", required=True, help="State id, e.g. LM, M_erased, NLM, Fig4")
    parser.add_argument("--param", action="append", metavar="NAME=DEG",
                        help="State parameter in degrees (repeatable); t=1 appends T gates")
    parser.add_argument("--p-dep", type=float, default=1.0, help="Per-CZ depolarizing survival probability")


def _add_sampling_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, help="Sampling seed")
    parser.add_argument("--exhaustive", action="store_true",
                        help="Use every local Clifford tuple with exact probabilities")
    parser.add_argument("--workers", type=int, help="Threads used for dataset collection")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="magic-rcm", description="Local and non-local magic of noisy few-qubit states")
    parser.add_argument("--log-level", default="WARNING", choices=("DEBUG", "INFO", "WARNING", "ERROR"))
    commands = parser.add_subparsers(dest="command", required=True)

    magic = commands.add_parser("magic", help="Exact magic of prepared states").add_subparsers(dest="action", required=True)
    exact = magic.add_parser("exact", help="Exact purity, stabilizer purity and M2")
    _add_state_flags(exact)
    exact.set_defaults(handler=_cmd_magic_exact)

    rcm = commands.add_parser("rcm", help="Randomized Clifford measurement").add_subparsers(dest="action", required=True)
    estimate = rcm.add_parser("estimate", help="Run a scenario file")
    estimate.add_argument("--scenario", required=True, help="Scenario file path or URL (JSON or YAML)")
    _add_sampling_flags(estimate)
    _add_output_flags(estimate)
    estimate.set_defaults(handler=_cmd_rcm_estimate)

    mitigate = commands.add_parser("mitigate", help="Least-squares readout mitigation")
    mitigate.add_argument("--probs", required=True, help="Comma-separated measured probabilities")
    mitigate.add_argument("--calibration", required=True,
                          help="File with {\"lambda\": [[...]]} or {\"counts\": [[...]], \"n_shot\": n}")
    mitigate.set_defaults(handler=_cmd_mitigate)

    erase = commands.add_parser("erase", help="Local-magic erasure").add_subparsers(dest="action", required=True)
    sweep = erase.add_parser("sweep", help="Rz x Rz landscape")
    _add_state_flags(sweep)
    sweep.add_argument("--step", type=float, default=FIG4_GRID_STEP_DEG, help="Grid step in degrees")
    sweep.add_argument("--format", choices=("json", "csv"), default="json")
    sweep.set_defaults(handler=_cmd_erase_sweep)
    optimize = erase.add_parser("optimize", help="Full local-unitary optimizer")
    _add_state_flags(optimize)
    optimize.add_argument("--seed", type=int, help="Restart seed")
    optimize.set_defaults(handler=_cmd_erase_optimize)

    fit = commands.add_parser("fit", help="Benchmark fits").add_subparsers(dest="action", required=True)
    rb = fit.add_parser("rb", help="Fit A*p^N + B to an RB curve")
    rb.add_argument("--curve", required=True, help="CSV with columns n_cliffords,survival")
    rb.add_argument("--interleaved", help="Interleaved RB CSV with the same lengths")
    rb.add_argument("--dim", type=int, default=2, help="Hilbert-space dimension")
    rb.set_defaults(handler=_cmd_fit_rb)

    report = commands.add_parser("report", help="Reproduction reports")
    report.add_argument("which", choices=("table1", "fig3", "fig4"))
    report.add_argument("--p-dep", type=float, help="Per-CZ survival probability")
    report.add_argument("--n-rand", type=int, default=DEFAULT_N_RAND)
    report.add_argument("--n-shot", type=int, default=DEFAULT_N_SHOT)
    report.add_argument("--theta", help="fig3: comma-separated angles in degrees")
    report.add_argument("--step", type=float, default=FIG4_GRID_STEP_DEG, help="fig4: grid step in degrees")
    _add_sampling_flags(report)
    _add_output_flags(report)
    report.set_defaults(handler=_cmd_report)

    serve = commands.add_parser("serve", help="Start the MCP server")
    serve.add_argument("--host", default=DEFAULT_HTTP_HOST)
    serve.add_argument("--port", type=int, default=DEFAULT_HTTP_PORT)
    return parser


def dispatch(args: argparse.Namespace, services: Optional[Services] = None) -> int:
    """Run the handler selected by the parser and return the process exit code."""
    handler: Callable[[argparse.Namespace, Services], int] = args.handler
    services = services or build_services()
    try:
        return handler(args, services)
    except argparse.ArgumentTypeError as e:
        return _finish_result(error_response(str(e)))
    except httpx.HTTPError as e:
        return _finish_result(error_response(ERROR_FETCH_FAILED.format(detail=str(e))))
    except (json.JSONDecodeError, yaml.YAMLError, OSError, ValueError) as e:
        return _finish_result(error_response(ERROR_PARSE_FAILED.format(detail=str(e))))
    except MagicSimError as e:
        return _finish_result(computation_error(e))
