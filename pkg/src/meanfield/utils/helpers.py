"""Helper utility functions for meanfield."""

import csv
import json
import math
from pathlib import Path
from typing import Any, Dict, Iterable, Sequence

import numpy as np


def ensure_directory_exists(path: Path) -> Path:
    """
    Ensure a directory exists, creating it if necessary.

    Args:
        path: Directory path

    Returns:
        Path: The same path, for chaining
    """
    path.mkdir(parents=True, exist_ok=True)
    return path


def write_json_file(path: Path, data: Dict[str, Any]) -> Path:
    """
    Write data to a JSON file with stable key order.

    Args:
        path: File path
        data: Data to write

    Returns:
        Path: The written file
    """
    ensure_directory_exists(path.parent)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2)
        f.write("\n")
    return path


def write_csv_file(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """
    Write a header row followed by data rows.

    Floats are written with ``repr`` so re-runs are byte-identical and values
    round-trip exactly.

    Args:
        path: File path
        header: Column names
        rows: Row values

    Returns:
        Path: The written file
    """
    ensure_directory_exists(path.parent)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(value) for value in row])
    return path


def format_value(value: Any) -> str:
    """Render a scalar for CSV output."""
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return repr(value)
    if hasattr(value, "item"):
        return format_value(value.item())
    return str(value)


def log_log_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """
    Least-squares slope of ln(y) against ln(x).

    Args:
        xs: Positive abscissae
        ys: Positive ordinates

    Returns:
        float: Fitted slope
    """
    log_x = np.log(np.asarray(xs, dtype=float))
    log_y = np.log(np.asarray(ys, dtype=float))
    slope, _intercept = np.polyfit(log_x, log_y, 1)
    return float(slope)
