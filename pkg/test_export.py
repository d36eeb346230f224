import csv
import io
import json

import pytest

from irreality.lib.errors import InvalidArgumentError
from irreality.lib.export import (
    DISTRIBUTION_COLUMNS,
    SWEEP_COLUMNS,
    SweepSpec,
    distribution_record,
    emit,
    format_number,
    render,
    sweep_records,
    table_records,
)
from irreality.lib.hardy_model import HardyConfig


@pytest.mark.parametrize(
    "kwargs",
    [
        {"p_min": 0.6, "p_max": 0.4},
        {"p_max": 1.5},
        {"steps": 1},
        {"stage": 7},
        {"format": "xml"},
        {"phi": float("nan")},
    ],
)
def test_sweep_spec_rejects(kwargs):
    with pytest.raises(InvalidArgumentError):
        SweepSpec(**kwargs)


def test_grid_includes_endpoints():
    grid = SweepSpec(p_min=0.2, p_max=0.4, steps=3).grid()
    assert list(grid) == pytest.approx([0.2, 0.3, 0.4])


def test_records_ordered_by_p_then_stage():
    records = sweep_records(SweepSpec(steps=3))
    assert [(r["p"], r["stage"]) for r in records][:5] == [(0.0, 1), (0.0, 2), (0.0, 3), (0.0, 4), (0.5, 1)]
    assert len(records) == 12
    assert set(records[0]) == set(SWEEP_COLUMNS)


def test_single_stage_sweep():
    records = sweep_records(SweepSpec(steps=2, stage=3))
    assert [r["stage"] for r in records] == [3, 3]
    assert records[1]["p_dark"] == pytest.approx(1 / 16)


def test_format_number():
    assert format_number(True) == "true"
    assert format_number(3) == "3"
    assert float(format_number(0.1 + 0.2)) == 0.1 + 0.2


def test_csv_and_json_agree():
    records = sweep_records(SweepSpec(steps=3, stage="all"))
    rows = list(csv.DictReader(io.StringIO(render(records, SWEEP_COLUMNS, "csv"))))
    payload = json.loads(render(records, SWEEP_COLUMNS, "json"))
    assert len(rows) == len(payload) == len(records)
    for row, obj in zip(rows, payload):
        assert list(row) == list(SWEEP_COLUMNS)
        for col in SWEEP_COLUMNS:
            assert float(row[col]) == obj[col]


def test_distribution_record_is_json_object():
    record = distribution_record(HardyConfig(1.0))
    payload = json.loads(render(record, DISTRIBUTION_COLUMNS, "json"))
    assert payload["y_plus_x_minus"] == pytest.approx(9 / 16)
    assert payload["p_at_least_one_dark"] == pytest.approx(3 / 16)
    lines = render(record, DISTRIBUTION_COLUMNS, "csv").splitlines()
    assert lines[0] == ",".join(DISTRIBUTION_COLUMNS)
    assert len(lines) == 2


def test_table_records():
    rows = table_records(HardyConfig(1.0))
    assert [r["realism"] for r in rows] == [True, False, False, False]


def test_emit_creates_parent_dirs(tmp_path):
    target = tmp_path / "out" / "sweep.csv"
    emit("a,b\n", target)
    assert target.read_text(encoding="utf-8") == "a,b\n"


def test_emit_dash_goes_to_stdout(capsys):
    emit("x\n", "-")
    assert capsys.readouterr().out == "x\n"
