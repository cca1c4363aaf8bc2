"""Deterministic JSON and CSV emission."""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

SCHEMA = "mrlab/1"
_DIGITS = 12


def clean(obj):
    """Convert to plain JSON types; floats rounded to 12 significant digits."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [clean(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return float(f"{x:.{_DIGITS}g}")
    if isinstance(obj, complex):
        return {"re": clean(obj.real), "im": clean(obj.imag)}
    return obj


def dumps(payload: dict) -> str:
    body = dict(payload)
    body.setdefault("schema", SCHEMA)
    return json.dumps(clean(body), sort_keys=True, indent=2) + "\n"


def write_json(path, payload: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(payload))
    return path


def write_csv(path, header: str, columns) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    cols = [np.asarray(c, dtype=float) for c in columns]
    lines = [header]
    for row in zip(*cols):
        lines.append(",".join(f"{v:.12g}" for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path
