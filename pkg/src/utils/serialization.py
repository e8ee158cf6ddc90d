"""
Rendering of results as JSON, CSV and aligned text
"""

import csv
import io
import json
from pathlib import Path
from typing import Any, List, Optional, Sequence

from src.models.report import Report


def to_json(data: Any) -> str:
    """Deterministic JSON (sorted keys, two-space indent)."""
    return json.dumps(data, sort_keys=True, indent=2)


def rows_to_csv(headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(headers)
    for row in rows:
        writer.writerow([f"{v:.12g}" if isinstance(v, float) else v for v in row])
    return buffer.getvalue()


def _format_number(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.5f}"


def report_to_text(report: Report) -> str:
    """Aligned table: one line per reported value, then one line per check."""
    lines: List[List[str]] = [["row", "quantity", "value", "error", "source"]]
    for row in report.rows:
        for item in row.values:
            lines.append([row.label, item.name, _format_number(item.value), _format_number(item.error),
                          item.provenance.value])
    checks: List[List[str]] = [["row", "check", "observed", "expected", "tolerance", "result"]]
    for row in report.rows:
        for check in row.checks:
            checks.append([row.label, check.name, _format_number(check.observed),
                           _format_number(check.expected), _format_number(check.tolerance),
                           "PASS" if check.passed else "FAIL"])
    notes = [f"{row.label}: {note}" for row in report.rows for note in row.notes]

    out = [f"Report {report.name}", "", _align(lines), "", _align(checks)]
    if notes:
        out += ["", *notes]
    out += ["", "PASSED" if report.passed else "FAILED"]
    return "\n".join(out) + "\n"


def _align(table: List[List[str]]) -> str:
    widths = [max(len(r[i]) for r in table) for i in range(len(table[0]))]
    return "\n".join("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in table)


def render_report(report: Report, fmt: str) -> str:
    """Report text in one of json, csv or text; csv falls back to json when there is no curve."""
    if fmt == "text":
        return report_to_text(report)
    if fmt == "csv" and report.curve_csv is not None:
        return report.curve_csv
    return report.to_json()


def write_report(report: Report, out_dir: str) -> List[Path]:
    """Write <name>.json, <name>.txt and, when present, <name>.csv into out_dir."""
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    written = [directory / f"{report.name}.json", directory / f"{report.name}.txt"]
    written[0].write_text(report.to_json() + "\n", encoding="utf-8")
    written[1].write_text(report_to_text(report), encoding="utf-8")
    if report.curve_csv is not None:
        csv_path = directory / f"{report.name}.csv"
        csv_path.write_text(report.curve_csv, encoding="utf-8")
        written.append(csv_path)
    return written
