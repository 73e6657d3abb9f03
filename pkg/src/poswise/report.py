"""Experiment report assembly and file emission.

A report is a plain JSON-serializable dict (schema below). The CSV holds the
loss curves only, full precision, one row per epoch of the longer run, with
the shorter run's cells left empty past its termination; wall-clock timings
live only in the JSON, so repeated runs of the same seed produce
byte-identical CSVs.
"""

from __future__ import annotations

import json
from pathlib import Path

from .optimizers import TrainRecord
from .svg_chart import render_loss_chart

SCHEMA_VERSION = 1

# Column and display naming per optimizer kind.
CSV_COLUMNS = {"gd": "loss_gd", "poswise": "loss_pw"}
DISPLAY_NAMES = {"gd": "gradient descent", "poswise": "position-wise"}

_OPTIMIZER_ENTRY_SCHEMA = {
    "type": "object",
    "properties": {
        "epochs_to_threshold": {"type": ["integer", "null"], "minimum": 1},
        "wall_seconds": {"type": "number", "minimum": 0},
        "final_loss": {"type": ["number", "null"]},
        "diverged": {"type": "boolean"},
        "loss_history": {"type": "array", "items": {"type": "number"}},
    },
    "required": ["epochs_to_threshold", "wall_seconds", "final_loss", "diverged", "loss_history"],
    "additionalProperties": False,
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "dataset": {"type": "string"},
        "seed": {"type": "integer"},
        "eta": {"type": "number", "exclusiveMinimum": 0},
        "threshold": {"type": "number"},
        "config": {"type": "object"},
        "optimizers": {
            "type": "object",
            "properties": {
                "gd": _OPTIMIZER_ENTRY_SCHEMA,
                "poswise": _OPTIMIZER_ENTRY_SCHEMA,
            },
            "additionalProperties": False,
            "minProperties": 1,
        },
    },
    "required": ["schema_version", "dataset", "seed", "eta", "threshold", "config", "optimizers"],
    "additionalProperties": False,
}

# JSON fields that vary between identically-seeded runs (timing only).
TIMING_FIELDS = ("wall_seconds",)


def build_report(
    dataset_name: str,
    seed: int,
    eta: float,
    threshold: float,
    config_echo: dict,
    records: dict[str, TrainRecord],
) -> dict:
    """Assemble the JSON-serializable report from one or two train records."""
    optimizers = {}
    for kind, rec in records.items():
        optimizers[kind] = {
            "epochs_to_threshold": rec.epochs_to_threshold,
            "wall_seconds": rec.wall_seconds,
            "final_loss": rec.loss_history[-1] if rec.loss_history else None,
            "diverged": rec.diverged,
            "loss_history": list(rec.loss_history),
        }
    return {
        "schema_version": SCHEMA_VERSION,
        "dataset": dataset_name,
        "seed": seed,
        "eta": eta,
        "threshold": threshold,
        "config": config_echo,
        "optimizers": optimizers,
    }


def strip_timing(report: dict) -> dict:
    """Deep copy of a report with the timing-only fields removed."""
    clone = json.loads(json.dumps(report))
    for entry in clone["optimizers"].values():
        for fld in TIMING_FIELDS:
            entry.pop(fld, None)
    return clone


def emit_json(report: dict, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(report, indent=2) + "\n")
    return path


def emit_csv(report: dict, path) -> Path:
    """Write the loss curves: header `epoch,<columns>`, full-precision floats,
    '.' decimal separator, no locale."""
    kinds = [k for k in CSV_COLUMNS if k in report["optimizers"]]
    histories = {k: report["optimizers"][k]["loss_history"] for k in kinds}
    n_rows = max((len(h) for h in histories.values()), default=0)
    lines = ["epoch," + ",".join(CSV_COLUMNS[k] for k in kinds)]
    for i in range(n_rows):
        cells = [str(i + 1)]
        for k in kinds:
            h = histories[k]
            cells.append(repr(h[i]) if i < len(h) else "")
        lines.append(",".join(cells))
    path = Path(path)
    path.write_text("\n".join(lines) + "\n")
    return path


def emit_svg(report: dict, path) -> Path:
    series = [
        (DISPLAY_NAMES[k], report["optimizers"][k]["loss_history"])
        for k in CSV_COLUMNS
        if k in report["optimizers"]
    ]
    svg = render_loss_chart(
        series,
        threshold=report["threshold"],
        title=f"{report['dataset']} (seed {report['seed']})",
    )
    path = Path(path)
    path.write_text(svg + "\n")
    return path


def parse_csv(path) -> dict[str, list[float]]:
    """Read an emitted CSV back into per-optimizer loss histories."""
    lines = Path(path).read_text().strip().splitlines()
    header = lines[0].split(",")
    out: dict[str, list[float]] = {col: [] for col in header[1:]}
    for line in lines[1:]:
        cells = line.split(",")
        for col, cell in zip(header[1:], cells[1:]):
            if cell:
                out[col].append(float(cell))
    return out
