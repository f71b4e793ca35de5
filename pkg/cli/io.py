"""
Input parsing and output writers for the nmcd command line.

All change-point indices written out are 1-based, first index of the new
segment.
"""

import contextlib
import csv
import io
import json
import logging
import math
import sys
from typing import Any, Dict, List, Optional, TextIO

import numpy as np
import pandas as pd

from core.errors import InputError
from core.pipeline import DetectionResult

logger = logging.getLogger("NMCD.CLI.IO")

SCHEMA_VERSION = 1


def _open_bytes(path: str):
    if path == "-":
        return contextlib.nullcontext(sys.stdin.buffer)
    return open(path, "rb")


def read_values(path: str, column: Optional[str] = None) -> np.ndarray:
    """
    Read observations from a file ("-" for stdin).

    Without a column, the file holds one number per line; blank lines are
    skipped. With a column, the file is a CSV with a header row.

    Raises:
        InputError: On a non-numeric or undecodable entry (the message names the line)
        OSError: If the file cannot be opened
    """
    if column is not None:
        return _read_column(path, column)
    values: List[float] = []
    with _open_bytes(path) as handle:
        for line_number, raw in enumerate(handle, start=1):
            try:
                text = raw.decode("utf-8").strip()
            except UnicodeDecodeError as exc:
                raise InputError(f"line {line_number}: not valid UTF-8 (byte {exc.start} of the line)") from None
            if not text:
                continue
            try:
                value = float(text)
            except ValueError:
                raise InputError(f"line {line_number}: not a number: {text!r}") from None
            if not math.isfinite(value):
                raise InputError(f"line {line_number}: non-finite value {text!r}")
            values.append(value)
    logger.debug(f"Read {len(values)} values from {path}")
    return np.asarray(values, dtype=np.float64)


def _read_column(path: str, column: str) -> np.ndarray:
    source = sys.stdin if path == "-" else path
    try:
        frame = pd.read_csv(source, encoding="utf-8")
    except pd.errors.EmptyDataError:
        raise InputError(f"{path} is empty") from None
    except UnicodeDecodeError as exc:
        raise InputError(f"{path}: not valid UTF-8 near byte {exc.start}") from None
    if column not in frame.columns:
        raise InputError(f"column {column!r} not found; available: {', '.join(map(str, frame.columns))}")
    numeric = pd.to_numeric(frame[column], errors="coerce")
    bad = numeric.isna() | ~np.isfinite(numeric.fillna(0.0))
    if bad.any():
        row = int(np.flatnonzero(bad.to_numpy())[0])
        # +2: header line plus 1-based numbering
        raise InputError(f"line {row + 2}: not a number in column {column!r}: {frame[column].iloc[row]!r}")
    return numeric.to_numpy(dtype=np.float64)


def finite_or_none(value: Optional[float]) -> Optional[float]:
    """JSON has no infinities; map them (and None) to null."""
    if value is None or not math.isfinite(value):
        return None
    return float(value)


def detection_record(result: DetectionResult, config_echo: Dict[str, Any], runtime_ms: float) -> Dict[str, Any]:
    """The JSON document for one detection run, keys in a fixed order."""
    bic = []
    if result.bic_trace is not None:
        bic = [
            {"L": e.l, "max_loglik": finite_or_none(e.max_loglik), "bic": finite_or_none(e.bic)}
            for e in result.bic_trace.entries
        ]
    candidates = None
    if result.candidates is not None:
        candidates = [int(c) for c in result.candidates.change_points]
    return {
        "schema_version": SCHEMA_VERSION,
        "method": result.method,
        "n": result.n,
        "k_hat": result.k_hat,
        "change_points": list(result.change_points),
        "loglik": finite_or_none(result.loglik),
        "bic": bic,
        "candidates": candidates,
        "config_echo": config_echo,
        "warnings": list(result.warnings),
        "runtime_ms": round(runtime_ms, 3),
    }


def write_json(document: Dict[str, Any], stream: TextIO) -> None:
    stream.write(json.dumps(document, indent=2, ensure_ascii=False))
    stream.write("\n")


def write_segments_csv(result: DetectionResult, stream: TextIO) -> None:
    """Per-index rows for plotting: index, value, segment id, segment mean."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["schema_version", "index", "value", "segment", "segment_mean"])
    labels = result.segment_labels()
    means = result.segment_means()
    for index, (value, label, mean) in enumerate(zip(result.values, labels, means), start=1):
        writer.writerow([SCHEMA_VERSION, index, repr(float(value)), int(label), repr(float(mean))])


def format_values(values: np.ndarray) -> str:
    """One value per line using the shortest round-tripping repr."""
    buffer = io.StringIO()
    for value in values:
        buffer.write(f"{float(value)!r}\n")
    return buffer.getvalue()
