"""Deterministic JSON output: sorted keys, floats at 12 significant digits."""

import json

import numpy as np


def clean_float(x) -> float:
    x = float(x)
    if abs(x) < 1e-12:
        return 0.0
    return float(f"{x:.12g}")


def complex_pair(z) -> list:
    z = complex(z)
    return [clean_float(z.real), clean_float(z.imag)]


def _default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return clean_float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def _normalize(o):
    if isinstance(o, float):
        return clean_float(o)
    if isinstance(o, dict):
        return {str(k): _normalize(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_normalize(v) for v in o]
    return o


def dumps(obj, indent=2) -> str:
    return json.dumps(_normalize(obj), sort_keys=True, indent=indent, default=_default) + "\n"
