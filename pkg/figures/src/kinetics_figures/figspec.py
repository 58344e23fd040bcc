"""Figure specs: a small JSON document naming input CSVs, the figure kind,
axis labels, and the output image path.

All validation happens before any image is written: missing files, header
mismatches (reported as expected vs found), and empty tables are errors.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

KINDS = ("lines", "heatmap", "snapshots")

STEADY_HEADER = ["mode_index", "k", "omega_over_J", "n"]
PERTURBATIVE_HEADER = ["mode_index", "omega_over_J", "n_be", "n_deformed",
                       "beta_of_omega"]
SNAPSHOT_HEADER = ["tau", "mode_index", "omega_over_J", "n"]
SWEEP_PREFIX = ["delta_over_J", "kappa_over_J"]

EXPECTED_INPUTS = {
    "lines": ("steady", "perturbative"),
    "heatmap": ("sweep",),
    "snapshots": ("snapshots",),
}


class FigureSpecError(ValueError):
    """Malformed figure spec or input table."""


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    inputs: dict[str, Path]
    output: Path
    labels: dict[str, str] = field(default_factory=dict)
    metric: str | None = None


def load_spec(path: str | Path) -> FigureSpec:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise FigureSpecError(f"cannot read spec {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FigureSpecError(f"spec {path} is not valid JSON: {exc}") from exc
    return parse_spec(doc)


def parse_spec(doc: dict) -> FigureSpec:
    if not isinstance(doc, dict):
        raise FigureSpecError("figure spec must be a JSON object")
    unknown = set(doc) - {"kind", "inputs", "output", "labels", "metric"}
    if unknown:
        raise FigureSpecError(f"unknown spec fields: {', '.join(sorted(unknown))}")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise FigureSpecError(f"kind must be one of {', '.join(KINDS)}, got {kind!r}")
    inputs_doc = doc.get("inputs")
    if not isinstance(inputs_doc, dict):
        raise FigureSpecError("inputs must be an object mapping roles to CSV paths")
    expected = EXPECTED_INPUTS[kind]
    missing = [role for role in expected if role not in inputs_doc]
    extra = [role for role in inputs_doc if role not in expected]
    if missing or extra:
        raise FigureSpecError(
            f"{kind} figures need inputs {{{', '.join(expected)}}}; "
            f"missing {missing or 'none'}, unexpected {extra or 'none'}"
        )
    inputs = {role: Path(p) for role, p in inputs_doc.items()}
    for role, p in inputs.items():
        if not p.exists():
            raise FigureSpecError(f"input CSV for {role!r} does not exist: {p}")
    output = doc.get("output")
    if not isinstance(output, str) or not output:
        raise FigureSpecError("output must be a non-empty image path")
    labels = doc.get("labels", {})
    if not isinstance(labels, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in labels.items()
    ):
        raise FigureSpecError("labels must map strings to strings")
    metric = doc.get("metric")
    if metric is not None and not isinstance(metric, str):
        raise FigureSpecError("metric must be a string")
    return FigureSpec(kind=kind, inputs=inputs, output=Path(output),
                      labels=dict(labels), metric=metric)


def read_table(path: Path, expected_header: list[str] | None = None,
               header_prefix: list[str] | None = None) -> tuple[list[str], list[list[str]]]:
    """Read a CSV, check its header, and require at least one data row."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise FigureSpecError(f"{path} is empty (no header row)")
    header, data = rows[0], rows[1:]
    if expected_header is not None and header != expected_header:
        raise FigureSpecError(
            f"{path}: header mismatch; expected {expected_header}, found {header}"
        )
    if header_prefix is not None and header[: len(header_prefix)] != header_prefix:
        raise FigureSpecError(
            f"{path}: header mismatch; expected leading columns {header_prefix}, "
            f"found {header}"
        )
    if not data:
        raise FigureSpecError(f"{path} has no data rows")
    return header, data
