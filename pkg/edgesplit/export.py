"""CSV and JSON output."""

from __future__ import annotations

import csv
import json
import sys
from collections.abc import Iterable, Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Any, TextIO

from .envelope import EnvelopePoint
from .oracle import OracleCandidate
from .solver import AllocationResult
from .sweep import SweepRow

_SWEEP_HEAD = ("status", "mAP_opt")
_SWEEP_TAIL = (
    "M_opt",
    "q_opt",
    "rho_opt",
    "T_u_opt",
    "T_d_opt",
    "uplink_bits",
    "downlink_bits",
    "uplink_fraction",
    "downlink_fraction",
)
_SWEEP_TAIL_FIELDS = (
    "m_opt",
    "q_opt",
    "rho_opt",
    "t_u_opt",
    "t_d_opt",
    "uplink_bits",
    "downlink_bits",
    "uplink_fraction",
    "downlink_fraction",
)
_BASELINE_PREFIX = "mAP_"

ENVELOPE_HEADER = ("M", "L_M", "q", "rho_opt")
TRACE_HEADER = ("M", "rho", "q", "T_u", "T_d", "mAP_star", "mAP")


@contextmanager
def open_target(path: str | Path | None) -> Iterator[TextIO]:
    """Open ``path`` for writing, or use stdout for None and '-'."""
    if path is None or str(path) == "-":
        yield sys.stdout
        return
    with open(path, "w", encoding="utf-8", newline="") as handle:
        yield handle


def _fmt(value: float | int | None) -> str:
    if value is None:
        return ""
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    return repr(float(value))


def _parse(text: str) -> float | None:
    return None if text == "" else float(text)


def _writer(handle: TextIO) -> Any:
    return csv.writer(handle, lineterminator="\n")


def write_sweep_csv(
    rows: list[SweepRow], baseline_names: Iterable[str], handle: TextIO
) -> None:
    """Write sweep rows, one column per baseline after mAP_opt."""
    if not rows:
        raise ValueError("No sweep rows to write")
    names = tuple(baseline_names)
    writer = _writer(handle)
    writer.writerow(
        (rows[0].param,)
        + _SWEEP_HEAD
        + tuple(_BASELINE_PREFIX + name for name in names)
        + _SWEEP_TAIL
    )
    for row in rows:
        writer.writerow(
            [_fmt(row.value), row.status, _fmt(row.map_opt)]
            + [_fmt(row.baseline_maps.get(name)) for name in names]
            + [_fmt(getattr(row, attr)) for attr in _SWEEP_TAIL_FIELDS]
        )


def read_sweep_csv(handle: TextIO) -> list[SweepRow]:
    """Read rows written by write_sweep_csv."""
    reader = csv.reader(handle)
    header = next(reader)
    param = header[0]
    names = [
        column[len(_BASELINE_PREFIX) :]
        for column in header[len(_SWEEP_HEAD) + 1 : len(header) - len(_SWEEP_TAIL)]
    ]
    rows = []
    for record in reader:
        value, status, map_opt = record[0], record[1], record[2]
        baseline_cells = record[3 : 3 + len(names)]
        tail = record[3 + len(names) :]
        baseline_maps = (
            {
                name: _parse(cell)
                for name, cell in zip(names, baseline_cells, strict=True)
            }
            if any(cell != "" for cell in baseline_cells)
            else {}
        )
        rows.append(
            SweepRow(
                param=param,
                value=float(value),
                status=status,
                map_opt=_parse(map_opt),
                baseline_maps=baseline_maps,
                **{
                    attr: _parse(cell)
                    for attr, cell in zip(_SWEEP_TAIL_FIELDS, tail, strict=True)
                },
            )
        )
    return rows


def write_envelope_csv(points: Iterable[EnvelopePoint], handle: TextIO) -> None:
    """Write (M, L_M(M), winning q, rho_opt(M)) samples."""
    writer = _writer(handle)
    writer.writerow(ENVELOPE_HEADER)
    for point in points:
        writer.writerow(
            (_fmt(point.m), _fmt(point.value), _fmt(point.q), _fmt(point.rho))
        )


def write_trace_csv(candidates: Iterable[OracleCandidate], handle: TextIO) -> None:
    """Write one row per feasible oracle candidate."""
    writer = _writer(handle)
    writer.writerow(TRACE_HEADER)
    for c in candidates:
        writer.writerow(
            tuple(
                _fmt(v)
                for v in (c.m, c.rho, c.q, c.t_u, c.t_d, c.map_star, c.map_value)
            )
        )


def dump_json(data: dict[str, Any], handle: TextIO) -> None:
    """Write a JSON document with a trailing newline."""
    json.dump(data, handle, indent=2)
    handle.write("\n")


def write_result_json(result: AllocationResult, handle: TextIO) -> None:
    """Write a solver result."""
    dump_json(result.as_dict(), handle)


def read_result_json(handle: TextIO) -> AllocationResult:
    """Read a solver result written by write_result_json."""
    return AllocationResult.from_dict(json.load(handle))
