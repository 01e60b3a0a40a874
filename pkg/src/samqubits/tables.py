"""CSV emitters and readers for the command-line outputs.

Data values are written with ``repr`` so reading them back is lossless.
Lines starting with ``#`` carry human-readable summaries and are skipped by
the readers.
"""

from __future__ import annotations

import csv
import io
from typing import Iterable, TextIO

import numpy as np

from .dipole import SweepRow
from .oscar import PROTOCOL_ORDER, ProtocolOutcome

SWEEP_HEADER = ("a_nm", "D_MHz", "method", "label")
HISTOGRAM_HEADER = ("outcome", "count", "fraction")
LEVELS_HEADER = ("quantity", "label", "MHz")
TENSOR_HEADER = ("i", "j", "D_MHz", "method", "label")


def _fmt(value):
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(header, rows: Iterable, comments: Iterable[str] = ()) -> str:
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def read_csv(stream: TextIO | str, header=None) -> list[dict]:
    """Rows as dicts of strings, skipping comment lines; checks the header if given."""
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    lines = [line for line in stream if line.strip() and not line.startswith("#")]
    reader = csv.DictReader(lines)
    if header is not None and tuple(reader.fieldnames or ()) != tuple(header):
        raise ValueError(f"unexpected CSV header {reader.fieldnames!r}, expected {list(header)!r}")
    return list(reader)


def comments(stream: TextIO | str) -> list[str]:
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    return [line[1:].strip() for line in stream if line.startswith("#")]


def sweep_csv(rows: Iterable[SweepRow]) -> str:
    return write_csv(SWEEP_HEADER, ((r.a / 1e-9, r.d_mhz, r.method, r.label) for r in rows))


def read_sweep_csv(stream) -> list[tuple[float, float, str, str]]:
    """Rows of (a_nm, D_MHz, method, label)."""
    return [
        (float(r["a_nm"]), float(r["D_MHz"]), r["method"], r["label"])
        for r in read_csv(stream, SWEEP_HEADER)
    ]


def histogram_csv(counts: dict[ProtocolOutcome, int], comments: Iterable[str] = ()) -> str:
    n = sum(counts.values())
    rows = ((o.value, counts[o], counts[o] / n) for o in PROTOCOL_ORDER)
    return write_csv(HISTOGRAM_HEADER, rows, comments)


def read_histogram_csv(stream) -> dict[ProtocolOutcome, int]:
    out = {}
    for r in read_csv(stream, HISTOGRAM_HEADER):
        out[ProtocolOutcome(r["outcome"])] = int(r["count"])
    return out


def read_levels_csv(stream) -> dict[str, dict[str, float]]:
    """{'level': {'S00': MHz, ...}, 'transition': {'w2_0': MHz, ...}}"""
    out: dict[str, dict[str, float]] = {}
    for r in read_csv(stream, LEVELS_HEADER):
        out.setdefault(r["quantity"], {})[r["label"]] = float(r["MHz"])
    return out


def read_tensor_csv(stream) -> np.ndarray:
    d = np.zeros((3, 3))
    for r in read_csv(stream, TENSOR_HEADER):
        d[int(r["i"]), int(r["j"])] = float(r["D_MHz"])
    return d
