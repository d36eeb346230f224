"""Sweep records and their CSV/JSON serialization."""
from __future__ import annotations
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import InvalidArgumentError
from .hardy_model import STAGES, HardyConfig, detection_distribution, realism_table, stage_report

log = logging.getLogger(__name__)

FORMATS = ("csv", "json")
SWEEP_COLUMNS = (
    "p",
    "stage",
    "irreality_plus",
    "irreality_minus",
    "local_irreality_plus",
    "local_irreality_minus",
    "rbn",
    "purity",
    "linear_entropy",
    "p_dark",
    "p_at_least_one_dark",
)
DISTRIBUTION_COLUMNS = (
    "x_plus_x_minus",
    "x_plus_y_minus",
    "y_plus_x_minus",
    "y_plus_y_minus",
    "annihilation",
    "p_dark",
    "p_at_least_one_dark",
)
TABLE_COLUMNS = ("stage", "realism", "local_causality", "realism_based_nonlocality", "rbn")


@dataclass(frozen=True)
class SweepSpec:
    p_min: float = 0.0
    p_max: float = 1.0
    steps: int = 201
    stage: int | str = "all"
    phi: float = 0.0
    format: str = "csv"
    output: Path | None = None

    def __post_init__(self) -> None:
        if not (0.0 <= self.p_min <= self.p_max <= 1.0):
            raise InvalidArgumentError(f"need 0 <= p_min <= p_max <= 1, got [{self.p_min}, {self.p_max}]")
        if int(self.steps) != self.steps or self.steps < 2:
            raise InvalidArgumentError(f"steps must be an integer >= 2, got {self.steps}")
        if self.stage != "all" and self.stage not in STAGES:
            raise InvalidArgumentError(f"stage must be 1..4 or 'all', got {self.stage!r}")
        if self.format not in FORMATS:
            raise InvalidArgumentError(f"format must be one of {FORMATS}, got {self.format!r}")
        if not np.isfinite(self.phi):
            raise InvalidArgumentError(f"phi must be finite, got {self.phi}")

    def grid(self) -> np.ndarray:
        """Uniform grid including both endpoints."""
        return np.linspace(self.p_min, self.p_max, int(self.steps))

    def stages(self) -> tuple[int, ...]:
        return STAGES if self.stage == "all" else (int(self.stage),)


def sweep_records(spec: SweepSpec) -> list[dict[str, Any]]:
    """One record per (p, stage), ordered by p then stage."""
    records = []
    for p in spec.grid():
        config = HardyConfig(float(p), spec.phi)
        dist = detection_distribution(config)
        for k in spec.stages():
            rep = stage_report(k, config)
            records.append(
                {
                    "p": float(p),
                    "stage": k,
                    "irreality_plus": rep.irreality_plus,
                    "irreality_minus": rep.irreality_minus,
                    "local_irreality_plus": rep.local_irreality_plus,
                    "local_irreality_minus": rep.local_irreality_minus,
                    "rbn": rep.rbn,
                    "purity": rep.matter_purity,
                    "linear_entropy": rep.matter_linear_entropy,
                    "p_dark": dist.both_dark,
                    "p_at_least_one_dark": dist.at_least_one_dark,
                }
            )
    log.info("swept %d p values over stages %s", spec.steps, spec.stages())
    return records


def distribution_record(config: HardyConfig) -> dict[str, float]:
    dist = detection_distribution(config)
    values = dict(zip(DISTRIBUTION_COLUMNS, dist.as_tuple()))
    values["p_dark"] = dist.both_dark
    values["p_at_least_one_dark"] = dist.at_least_one_dark
    return values


def table_records(config: HardyConfig) -> list[dict[str, Any]]:
    return [
        {
            "stage": row.stage,
            "realism": row.realism,
            "local_causality": row.local_causality,
            "realism_based_nonlocality": row.realism_based_nonlocality,
            "rbn": row.rbn,
        }
        for row in realism_table(config)
    ]


def format_number(value: Any) -> str:
    """17 significant digits for floats: exact round trip for doubles."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


def _json_value(value: Any) -> Any:
    if isinstance(value, (bool, int, np.integer)):
        return value if isinstance(value, bool) else int(value)
    return float(format_number(value))


def to_csv(records: Iterable[dict[str, Any]], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for rec in records:
        writer.writerow([format_number(rec[c]) for c in columns])
    return buf.getvalue()


def to_json(records: Iterable[dict[str, Any]] | dict[str, Any], columns: Sequence[str]) -> str:
    if isinstance(records, dict):
        payload: Any = {c: _json_value(records[c]) for c in columns}
    else:
        payload = [{c: _json_value(rec[c]) for c in columns} for rec in records]
    return json.dumps(payload, indent=2) + "\n"


def render(records: list[dict[str, Any]] | dict[str, Any], columns: Sequence[str], fmt: str) -> str:
    if fmt == "json":
        return to_json(records, columns)
    rows = [records] if isinstance(records, dict) else records
    return to_csv(rows, columns)


def write_text(path: Path | str, content: str) -> None:
    """Write text file (UTF-8, LF), creating directories if needed."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    with p.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(content)


def emit(content: str, output: Path | str | None) -> None:
    if output is None or str(output) == "-":
        sys.stdout.write(content)
        sys.stdout.flush()
    else:
        write_text(output, content)
