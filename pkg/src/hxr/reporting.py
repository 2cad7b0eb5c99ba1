"""JSON and CSV writers with bit-faithful floats.

Floats are printed with 17 significant digits so that reports round-trip
exactly; NaN and infinities become null.  Key order follows insertion order,
so identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math
from enum import Enum
from pathlib import Path

import numpy as np

SCHEMA_VERSION = 1


def format_float(x):
    x = float(x)
    if not math.isfinite(x):
        return "null"
    text = "%.17g" % x
    if text == "-0":
        text = "0"
    return text


def to_plain(obj):
    """Numpy scalars/arrays and objects with to_json() to plain Python structures."""
    if hasattr(obj, "to_json") and not isinstance(obj, type):
        return to_plain(obj.to_json())
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, Path):
        return str(obj)
    return obj


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent=2):
    return _encode(to_plain(obj), indent, 0) + "\n"


def write_json(path, obj):
    Path(path).write_text(dumps(obj))


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_float(v) if isinstance(v, (float, np.floating)) else v
                             for v in row])


def write_event_log(path, events):
    rows = [(e["t"], e["event"], dumps(e["data"], indent=0).replace("\n", "").strip())
            for e in events]
    write_csv(path, ["t", "event", "data"], rows)
