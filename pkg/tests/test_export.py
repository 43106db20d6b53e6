"""Tests for CSV and JSON output."""

from __future__ import annotations

import csv
import io
from pathlib import Path

import pytest

from edgesplit.const import BASELINE_NONE_UPDATE, STATUS_ERROR, STATUS_OK
from edgesplit.envelope import build_envelope
from edgesplit.export import (
    ENVELOPE_HEADER,
    TRACE_HEADER,
    open_target,
    read_result_json,
    read_sweep_csv,
    write_envelope_csv,
    write_result_json,
    write_sweep_csv,
    write_trace_csv,
)
from edgesplit.model import ProblemInstance
from edgesplit.oracle import GridSpec, brute_force
from edgesplit.solver import solve
from edgesplit.sweep import NoneUpdateBaseline, SweepRow, SweepSpec, run_sweep


@pytest.fixture
def sweep_rows(reference_instance: ProblemInstance) -> list[SweepRow]:
    """Bandwidth sweep over the reference channel with the no-update baseline."""
    spec = SweepSpec("B", (5e4, 1e5, 1e6), (NoneUpdateBaseline(),))
    rows = run_sweep(reference_instance, spec)
    return [*rows, SweepRow("B", 2e6, STATUS_ERROR)]


class TestSweepCsv:
    """Tests for the sweep CSV."""

    def test_header(self, sweep_rows: list[SweepRow]) -> None:
        """Test the swept parameter leads and baselines follow mAP_opt."""
        handle = io.StringIO()
        write_sweep_csv(sweep_rows, (BASELINE_NONE_UPDATE,), handle)
        header = handle.getvalue().splitlines()[0].split(",")
        assert header[:4] == ["B", "status", "mAP_opt", "mAP_none-update"]
        assert header[-2:] == ["uplink_fraction", "downlink_fraction"]

    def test_round_trip(self, sweep_rows: list[SweepRow]) -> None:
        """Test rows read back unchanged, error rows with empty cells."""
        handle = io.StringIO()
        write_sweep_csv(sweep_rows, (BASELINE_NONE_UPDATE,), handle)
        handle.seek(0)
        assert read_sweep_csv(handle) == sweep_rows

    def test_error_row_cells(self, sweep_rows: list[SweepRow]) -> None:
        """Test failed points keep their value and status only."""
        handle = io.StringIO()
        write_sweep_csv(sweep_rows, (BASELINE_NONE_UPDATE,), handle)
        last = list(csv.reader(io.StringIO(handle.getvalue())))[-1]
        assert last[:2] == ["2000000.0", STATUS_ERROR]
        assert all(cell == "" for cell in last[2:])

    def test_deterministic(self, reference_instance: ProblemInstance) -> None:
        """Test two runs write byte-identical files."""
        spec = SweepSpec.from_range("N", 5.0, 50.0, 6)
        outputs = []
        for _ in range(2):
            handle = io.StringIO()
            write_sweep_csv(run_sweep(reference_instance, spec), (), handle)
            outputs.append(handle.getvalue())
        assert outputs[0] == outputs[1]

    def test_empty(self) -> None:
        """Test there must be something to write."""
        with pytest.raises(ValueError):
            write_sweep_csv([], (), io.StringIO())


class TestEnvelopeAndTraceCsv:
    """Tests for the envelope and oracle trace CSVs."""

    def test_envelope(self, two_level_instance: ProblemInstance) -> None:
        """Test one row per sample under the fixed header."""
        handle = io.StringIO()
        write_envelope_csv(build_envelope(two_level_instance).sample(11), handle)
        records = list(csv.reader(io.StringIO(handle.getvalue())))
        assert tuple(records[0]) == ENVELOPE_HEADER
        assert len(records) == 12
        assert float(records[1][0]) == 0.0
        assert float(records[-1][0]) == 1.25e6
        assert {float(r[2]) for r in records[1:]} <= {8.0, 16.0}

    def test_trace(self, reference_instance: ProblemInstance) -> None:
        """Test one row per feasible candidate."""
        result = brute_force(reference_instance, GridSpec(3, 3), trace=True)
        assert result.trace is not None
        handle = io.StringIO()
        write_trace_csv(result.trace, handle)
        records = list(csv.reader(io.StringIO(handle.getvalue())))
        assert tuple(records[0]) == TRACE_HEADER
        assert len(records) == result.feasible + 1


class TestResultJson:
    """Tests for the solver result JSON."""

    def test_round_trip(self, two_level_instance: ProblemInstance) -> None:
        """Test the result reads back equal."""
        result = solve(two_level_instance)
        handle = io.StringIO()
        write_result_json(result, handle)
        assert handle.getvalue().endswith("}\n")
        handle.seek(0)
        assert read_result_json(handle) == result


class TestOpenTarget:
    """Tests for open_target."""

    def test_dash_is_stdout(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test '-' and None write to standard output."""
        with open_target("-") as handle:
            handle.write("a\n")
        with open_target(None) as handle:
            handle.write("b\n")
        assert capsys.readouterr().out == "a\nb\n"

    def test_file(self, tmp_path: Path) -> None:
        """Test a path is created and written."""
        path = tmp_path / "out.csv"
        with open_target(path) as handle:
            handle.write(STATUS_OK)
        assert path.read_text(encoding="utf-8") == STATUS_OK
