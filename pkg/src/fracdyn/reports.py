"""Delimited report writers: CSV with metadata comment lines, and JSON.

Floats are written with 17 significant digits so values round-trip through
IEEE doubles exactly.  Metadata (seed, version, argv) goes into '#'-prefixed
lines before the header; no timestamps, so identical runs produce identical
bytes.
"""

import json
from pathlib import Path


def format_value(x):
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def write_csv(path, columns, rows, meta=None):
    """Write rows (sequences matching `columns`) with '#' metadata lines."""
    path = Path(path)
    lines = []
    for key, val in (meta or {}).items():
        lines.append(f"# {key}={val}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def write_json(path, columns, rows, meta=None):
    """One top-level object mirroring the CSV columns as arrays."""
    path = Path(path)
    data = {"meta": dict(meta or {})}
    cols = {name: [] for name in columns}
    for row in rows:
        for name, val in zip(columns, row):
            cols[name].append(val)
    data["columns"] = cols
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
    return path


def write_report(path, columns, rows, meta=None, fmt="csv"):
    if fmt == "csv":
        return write_csv(path, columns, rows, meta)
    if fmt == "json":
        return write_json(path, columns, rows, meta)
    raise ValueError(f"unknown report format {fmt!r}")


def read_csv(path):
    """Read back a report CSV: returns (columns, rows, meta)."""
    meta = {}
    columns = None
    rows = []
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, val = body.split("=", 1)
                meta[key.strip()] = val.strip()
            continue
        parts = line.split(",")
        if columns is None:
            columns = parts
        else:
            rows.append([_maybe_float(p) for p in parts])
    return columns, rows, meta


def _maybe_float(text):
    try:
        return float(text)
    except ValueError:
        return text
