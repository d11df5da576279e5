"""
Text rendering of report models as JSON, CSV or Markdown.
"""

import csv
import io
import json
from typing import Dict, Iterable, List

from pydantic import BaseModel

from src.config.constants import CSV_DIGITS
from src.models.audit import Cell24Dump, ConstantsTable, PackingSummary, VerificationAudit
from src.models.density import OptimizeResult, SweepResult
from src.models.run_config import OutputFormat


class UnsupportedFormat(ValueError):
    """A report has no rendering in the requested format."""


def render_json(model: BaseModel) -> str:
    """Indented JSON with "pass" for check verdicts and full float precision."""
    payload = model.model_dump(mode="json", by_alias=True)
    return json.dumps(payload, indent=2) + "\n"


def _fmt(value, digits: int) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.{digits}g}"
    return str(value)


def _csv(fieldnames: List[str], rows: Iterable[Dict], digits: int) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _fmt(row.get(k), digits) for k in fieldnames})
    return buffer.getvalue()


def render_csv(model: BaseModel, digits: int = CSV_DIGITS) -> str:
    """
    CSV rendering, one row per record, LF line endings.

    Raises:
        UnsupportedFormat: For reports without a tabular form
    """
    if isinstance(model, SweepResult):
        return _csv(
            ["x", "delta_closed", "delta_oracle", "residual"],
            (row.model_dump() for row in model.rows),
            digits,
        )
    if isinstance(model, ConstantsTable):
        return _csv(
            ["name", "derived", "reference", "difference", "discrepancy", "note"],
            (row.model_dump() for row in model.rows),
            digits,
        )
    if isinstance(model, OptimizeResult):
        return _csv(
            ["family", "x_max", "argmax_x", "max_density", "oracle_residual"],
            (
                {**r.model_dump(exclude={"samples"}), "family": r.family.value}
                for r in model.reports
            ),
            digits,
        )
    if isinstance(model, VerificationAudit):
        return _csv(
            ["name", "value", "threshold", "pass", "detail"],
            (check.model_dump(by_alias=True) for check in model.checks),
            digits,
        )
    if isinstance(model, Cell24Dump):
        header = ["vertex", "x0", "x1", "x2", "x3", "x4"] + [f"A{j}" for j in range(1, 25)]
        rows = []
        for i, (coords, classes) in enumerate(zip(model.vertices, model.neighbor_class), start=1):
            row = {"vertex": f"A{i}"}
            row.update({f"x{k}": v for k, v in enumerate(coords)})
            row.update({f"A{j}": k for j, k in enumerate(classes, start=1)})
            rows.append(row)
        return _csv(header, rows, digits)
    raise UnsupportedFormat(f"{type(model).__name__} has no CSV rendering")


def render_markdown(model: BaseModel) -> str:
    """
    Markdown rendering of the packing summary.

    Raises:
        UnsupportedFormat: For anything but a PackingSummary
    """
    if not isinstance(model, PackingSummary):
        raise UnsupportedFormat(f"{type(model).__name__} has no Markdown rendering")

    lines = ["# Horoball packings of the ideal 24-cell", "", "## Family optima", ""]
    lines += [
        "| family | argmax x | max density | oracle residual | arrangement |",
        "|---|---|---|---|---|",
    ]
    for o in model.optima:
        lines.append(
            f"| {o.family.value} | {o.argmax_x:.12f} | {o.max_density:.12f} "
            f"| {o.oracle_residual:.2e} | {o.endpoint_arrangement} |"
        )
    lines += ["", "## Largest horoball regimes", ""]
    lines += ["| regime | sector volume up to | optimal density |", "|---|---|---|"]
    for r in model.regimes:
        lines.append(
            f"| {r.regime} | {r.upper_bound_label} = {r.upper_bound:.12f} | {r.optimal_density:.12f} |"
        )
    lines += [
        "",
        "## Global optimum",
        "",
        f"Arrangement {model.global_optimum_arrangement} attains density "
        f"{model.global_optimum_density:.12f}; {model.comparison_note}.",
        "",
        "## Reference densities",
        "",
    ]
    lines += [f"- {name}: {value:.5f}" for name, value in sorted(model.reference_densities.items())]
    return "\n".join(lines) + "\n"


def render(model: BaseModel, fmt: OutputFormat, digits: int = CSV_DIGITS) -> str:
    """Render a report model in the requested format."""
    fmt = OutputFormat(fmt)
    if fmt is OutputFormat.JSON:
        return render_json(model)
    if fmt is OutputFormat.CSV:
        return render_csv(model, digits)
    return render_markdown(model)
