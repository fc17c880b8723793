"""Serialization helpers: JSON reports, CSV traces and metric snapshots."""

from __future__ import annotations

import csv
import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from ..asymptotics.runner import HEADER, FunctionalTrace
from ..geometry.fields import MetricField


def _default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)!r}")


def write_json(path, payload: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=_default)
        fh.write("\n")
    return path


def write_trace_csv(path, trace: FunctionalTrace) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(HEADER)
        for row in trace.rows():
            writer.writerow([repr(float(x)) for x in row])
    return path


def write_plot_data(path, trace: FunctionalTrace, mna_value) -> Path:
    """Columns (t, mdon, mna*t) for external plotting."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    slope = float(mna_value)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "mdon", "mna_times_t"])
        for t, m in zip(trace.t_values, trace.mdon_values):
            writer.writerow([repr(float(t)), repr(float(m)), repr(slope * float(t))])
    return path


def write_metric_snapshot(path, field: MetricField) -> Path:
    """CSV snapshot: node index, rho, theta, then r^2 complex entries row-major."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        r = field.rank
        header = ["index", "rho", "theta"] + [
            f"h_{i}{j}" for i in range(r) for j in range(r)
        ]
        writer.writerow(header)
        for row in field.snapshot_rows():
            idx, rho, theta, *entries = row
            writer.writerow(
                [idx, repr(float(rho)), repr(float(theta))]
                + [f"{e.real!r}{e.imag:+}j" for e in entries]
            )
    return path
