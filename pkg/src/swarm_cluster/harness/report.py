"""Report CSV and JSONL trace writers."""

from __future__ import annotations

import csv
import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

REPORT_COLUMNS = (
    "dataset",
    "algorithm",
    "seed",
    "k",
    "sicd",
    "error_rate_matching",
    "error_rate_purity",
    "convergence_iteration",
    "min_inter_cluster",
    "iterations_run",
    "wall_ms",
)


@dataclass
class ReportRow:
    dataset: str
    algorithm: str
    seed: int
    k: int | None = None
    sicd: float | None = None
    error_rate_matching: float | None = None
    error_rate_purity: float | None = None
    convergence_iteration: int | None = None
    min_inter_cluster: float | None = None
    iterations_run: int | None = None
    wall_ms: float | None = None
    # Set when the run aborted; the metric fields are then left empty.
    error: str | None = field(default=None, compare=False)

    @property
    def failed(self) -> bool:
        return self.error is not None


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".6g")
    return str(value)


def row_cells(row: ReportRow) -> list[str]:
    values = dataclasses.asdict(row)
    return [format_value(values[c]) for c in REPORT_COLUMNS]


def write_report(rows, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for row in rows:
            writer.writerow(row_cells(row))
    return path


def write_trace(trace, path) -> Path:
    """One JSON object per line: ``{"t": ..., "gbest_fitness": ..., "w": ...}``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for rec in trace:
            d = rec.as_dict() if hasattr(rec, "as_dict") else dict(rec)
            fh.write(json.dumps(d) + "\n")
    return path


def read_trace(path) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]
