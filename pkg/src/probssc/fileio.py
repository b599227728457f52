"""File formats: matrix/label CSV, result JSON, benchmark tables.

Matrix files are plain CSV with one ambient dimension per row and one
point per column, no header. Label files hold one 0-based integer per
line. Every float is written with 17 significant digits so 64-bit values
round-trip exactly, and JSON key order is fixed, so identical inputs
produce byte-identical files (timestamps live in a separate metadata
field excluded from any content comparison).
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from ._version import __version__
from .model import ValidationError

_FLOAT_FMT = ".17g"


class ParseError(ValueError):
    """Input file defect at a specific position."""

    def __init__(self, line, col, message):
        self.line = line
        self.col = col
        self.message = message
        super().__init__(f"line {line}, col {col}: {message}")


def _fnum(x):
    return format(float(x), _FLOAT_FMT)


def read_matrix(path):
    """Parse a matrix CSV (rows = ambient dimensions, columns = points).

    Raises
    ------
    ParseError
        On empty files, non-numeric or non-finite tokens, and ragged
        rows, with 1-based line and column positions.
    """
    rows = []
    width = None
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.strip("\r\n")
            if line == "":
                continue
            parts = line.split(",")
            if width is None:
                width = len(parts)
            elif len(parts) != width:
                raise ParseError(
                    lineno, 1, f"ragged row: expected {width} fields, got {len(parts)}"
                )
            row = np.empty(width)
            for col, tok in enumerate(parts, 1):
                try:
                    v = float(tok)
                except ValueError:
                    raise ParseError(lineno, col, f"invalid number {tok.strip()!r}") from None
                if not np.isfinite(v):
                    raise ParseError(lineno, col, f"non-finite value {tok.strip()!r}")
                row[col - 1] = v
            rows.append(row)
    if not rows:
        raise ParseError(1, 1, "empty matrix file")
    return np.vstack(rows)


def write_matrix(path, X):
    """Write a matrix as CSV, 17 significant digits per entry."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValidationError("matrix must be 2-d")
    with open(path, "w", encoding="utf-8") as f:
        for row in X:
            f.write(",".join(_fnum(v) for v in row))
            f.write("\n")


def read_labels(path):
    """Parse a labels file, one 0-based integer per line."""
    labels = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            tok = line.strip()
            if tok == "":
                continue
            try:
                v = int(tok)
            except ValueError:
                raise ParseError(lineno, 1, f"invalid label {tok!r}") from None
            if v < 0:
                raise ParseError(lineno, 1, f"negative label {v}")
            labels.append(v)
    if not labels:
        raise ParseError(1, 1, "empty labels file")
    return np.array(labels, dtype=np.int64)


def write_labels(path, labels):
    with open(path, "w", encoding="utf-8") as f:
        for v in np.asarray(labels).ravel():
            f.write(f"{int(v)}\n")


def _to_json(obj, indent=0):
    """Deterministic JSON with fixed key order and 17-significant-digit
    floats."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f"{inner}{json.dumps(str(k))}: {_to_json(v, indent + 1)}" for k, v in obj.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if len(obj) == 0:
            return "[]"
        items = ",\n".join(f"{inner}{_to_json(v, indent + 1)}" for v in obj)
        return "[\n" + items + "\n" + pad + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if not np.isfinite(v):
            return json.dumps(v)
        return _fnum(v)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return _to_json(obj.tolist(), indent)
    raise ValidationError(f"cannot serialize {type(obj).__name__}")


def result_to_dict(result, timestamp=None):
    """ClusteringResult as the result JSON schema (plain dict)."""
    if not result.history:
        raise ValidationError("result has empty history")
    if timestamp is None:
        timestamp = datetime.now(timezone.utc).isoformat()
    return {
        "labels": [int(v) for v in result.labels],
        "iterations": result.iterations,
        "stop_reason": result.stop_reason,
        "history": [
            {
                "t": rec.t,
                "kappa": rec.kappa,
                "omega": rec.omega,
                "objective": rec.objective,
                "labels": [int(v) for v in rec.labels],
            }
            for rec in result.history
        ],
        "params": result.params.to_dict(),
        "warnings": list(result.warnings),
        "meta": {
            "timestamp": timestamp,
            "version": __version__,
            "seed": result.params.seed,
        },
    }


def write_result(path, result, timestamp=None):
    """Write a ClusteringResult as JSON. Results with empty history are
    rejected before anything is written."""
    text = _to_json(result_to_dict(result, timestamp=timestamp)) + "\n"
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)


def read_result(path):
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def _grid_of(table):
    """(C list, ratio list) in the table's cell order."""
    Cs, ratios = [], []
    for c in table.cells:
        if c.C not in Cs:
            Cs.append(c.C)
        if c.ratio not in ratios:
            ratios.append(c.ratio)
    return Cs, ratios


def _table_csv(table, field):
    """Flat table CSV: one row per method, one column per (C, ratio)."""
    Cs, ratios = _grid_of(table)
    cols = [(C, r) for C in Cs for r in ratios]
    lines = ["method," + ",".join(f"C{C}_{_fnum(r)}" for C, r in cols)]
    for m in table.methods:
        vals = [getattr(table.cell(C, r, m), field) for C, r in cols]
        lines.append(m + "," + ",".join(_fnum(v) for v in vals))
    return "\n".join(lines) + "\n"


def _raw_csv(table):
    lines = ["method,C,ratio,trial,error,ssr,iterations"]
    for cell in table.cells:
        for tid, e, s, it in zip(cell.trial_ids, cell.errors, cell.ssr, cell.iterations):
            lines.append(
                f"{cell.method},{cell.C},{_fnum(cell.ratio)},{int(tid)},"
                f"{_fnum(e)},{_fnum(s)},{int(it)}"
            )
    return "\n".join(lines) + "\n"


def _trace_csv(table, attr, value_name):
    lines = [f"C,ratio,trial,t,{value_name}"]
    for cell in table.cells:
        traces = getattr(cell, attr)
        if traces is None:
            continue
        for tid, row in zip(cell.trial_ids, traces):
            for t, v in enumerate(row, 1):
                lines.append(f"{cell.C},{_fnum(cell.ratio)},{int(tid)},{t},{_fnum(v)}")
    return "\n".join(lines) + "\n"


def benchmark_to_dict(table, timestamp=None):
    if timestamp is None:
        timestamp = datetime.now(timezone.utc).isoformat()
    return {
        "config": {
            "trials": table.trials,
            "base_seed": table.base_seed,
            "methods": list(table.methods),
            "trace_tmax": table.trace_tmax,
            "params": table.params.to_dict(),
        },
        "cells": [
            {
                "C": c.C,
                "ratio": c.ratio,
                "method": c.method,
                "mean_error": c.mean_error,
                "median_error": c.median_error,
                "mean_ssr": c.mean_ssr,
                "failures": c.failures,
                "trial_ids": [int(v) for v in c.trial_ids],
                "errors": list(c.errors),
                "ssr": list(c.ssr),
                "iterations": [int(v) for v in c.iterations],
            }
            for c in table.cells
        ],
        "failures": [
            {"C": C, "ratio": r, "trial": t, "error": msg}
            for C, r, t, msg in table.failure_log
        ],
        "meta": {"timestamp": timestamp, "version": __version__, "seed": table.base_seed},
    }


def write_benchmark(out_dir, table, timestamp=None):
    """Write the benchmark bundle into a directory.

    Files: error_mean.csv, error_median.csv, ssr_mean.csv (one row per
    method, one column per (C, ratio) cell, ratios as fractions),
    raw_values.csv (tidy per-trial values), kappa_traces.csv and
    error_traces.csv when fixed-length traces were recorded, and
    benchmark.json with config, aggregates, and per-trial failures.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "error_mean.csv").write_text(_table_csv(table, "mean_error"), encoding="utf-8")
    (out / "error_median.csv").write_text(_table_csv(table, "median_error"), encoding="utf-8")
    (out / "ssr_mean.csv").write_text(_table_csv(table, "mean_ssr"), encoding="utf-8")
    (out / "raw_values.csv").write_text(_raw_csv(table), encoding="utf-8")
    if any(c.kappa_traces is not None for c in table.cells):
        (out / "kappa_traces.csv").write_text(
            _trace_csv(table, "kappa_traces", "kappa_fraction"), encoding="utf-8"
        )
        (out / "error_traces.csv").write_text(
            _trace_csv(table, "error_traces", "error"), encoding="utf-8"
        )
    (out / "benchmark.json").write_text(
        _to_json(benchmark_to_dict(table, timestamp=timestamp)) + "\n", encoding="utf-8"
    )
    return out


def parse_config(path):
    """Parse a key=value config file; blank lines and # comments are
    ignored. Returns a {key: string} dict; the CLI interprets values."""
    out = {}
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            s = line.strip()
            if s == "" or s.startswith("#"):
                continue
            if "=" not in s:
                raise ParseError(lineno, 1, f"expected key=value, got {s!r}")
            key, _, value = s.partition("=")
            key = key.strip()
            if not key:
                raise ParseError(lineno, 1, "empty key")
            out[key] = value.strip()
    return out
