"""Deterministic CSV/JSON rendering of sweep results."""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

__all__ = ["format_fixed", "format_sci", "render_csv", "render_json", "render_table"]


def _is_int(value) -> bool:
    return isinstance(value, (int, np.integer)) and not isinstance(value, (bool, np.bool_))


def format_fixed(value, precision: int) -> str:
    """Fixed-point text for data columns; integers and booleans pass through."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if _is_int(value):
        return str(int(value))
    if isinstance(value, str):
        return value
    text = f"{float(value):.{precision}f}"
    if text.startswith("-") and float(text) == 0.0:
        text = text[1:]
    return text


def format_sci(value, precision: int) -> str:
    """Scientific notation for diagnostics that may be far below the fixed-point resolution."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if _is_int(value):
        return str(int(value))
    if isinstance(value, str):
        return value
    return f"{float(value):.{precision}e}"


def _jsonable(value, formatter, precision):
    if isinstance(value, dict):
        return {k: _jsonable(v, formatter, precision) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v, formatter, precision) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if _is_int(value):
        return int(value)
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            return None
        return float(formatter(value, precision))
    return value


def render_csv(rows: list[dict], precision: int) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    columns = list(rows[0])
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_fixed(row[c], precision) for c in columns])
    return buf.getvalue()


def render_json(spec: dict, rows: list[dict], summary: dict, precision: int) -> str:
    document = {
        "spec": spec,
        "rows": _jsonable(rows, format_fixed, precision),
        "summary": _jsonable(summary, format_sci, precision),
    }
    return json.dumps(document, indent=2, sort_keys=False) + "\n"


def render_table(columns, precision: int = 16) -> str:
    """Whitespace-separated numeric table, e.g. (theta, hbar grad S)."""
    data = np.column_stack(columns)
    lines = [" ".join(f"{v:.{precision}e}" for v in row) for row in data]
    return "\n".join(lines) + "\n"
