"""Deterministic text output helpers.

All floating-point values are printed with 17 significant digits so that
doubles round-trip exactly through text and identical inputs produce
byte-identical files. The JSON emitter is a small explicit walk instead of
json.dumps because the stdlib encoder offers no hook over float formatting.
"""

import json
import math

import numpy as np

from .errors import DomainError


def fmt_float(x):
    x = float(x)
    if not math.isfinite(x):
        raise DomainError("refusing to serialize a non-finite value")
    return format(x, ".17g")


def _emit(obj, indent):
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = (f"{inner}{json.dumps(str(k))}: {_emit(v, indent + 1)}"
                 for k, v in obj.items())
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = [_emit(v, indent + 1) for v in obj]
        if not seq:
            return "[]"
        return "[\n" + ",\n".join(inner + s for s in seq) + "\n" + pad + "]"
    raise DomainError(f"cannot serialize {type(obj).__name__}")


def dumps_json(obj):
    """JSON text with floats at 17 significant digits, newline terminated."""
    return _emit(obj, 0) + "\n"


def write_json(obj, path):
    with open(path, "w") as fh:
        fh.write(dumps_json(obj))


def read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read JSON file {path}: {exc}") from None
