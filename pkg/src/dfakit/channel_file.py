"""JSON channel files.

Layout (UTF-8)::

    {"dim": 2, "kraus": [{"re": [[...], ...], "im": [[...], ...]}, ...]}

Floats are written with 17 significant digits, so write -> read -> write
reproduces the file byte for byte.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .channel import KrausChannel


class ChannelFileError(ValueError):
    pass


def _fmt(v: float) -> str:
    # -0.0 would read back as the integer 0
    return format(float(v) + 0.0, ".17g")


def _rows(a: np.ndarray, indent: str) -> str:
    lines = ["[" + ", ".join(_fmt(v) for v in row) + "]" for row in a]
    return "[\n" + ",\n".join(indent + "  " + line for line in lines) + "\n" + indent + "]"


def matrix_to_text(a: np.ndarray, indent: str = "    ") -> str:
    a = np.asarray(a, dtype=complex)
    return ("{\n"
            f'{indent}  "re": {_rows(a.real, indent + "  ")},\n'
            f'{indent}  "im": {_rows(a.imag, indent + "  ")}\n'
            f"{indent}}}")


def dumps(ch: KrausChannel) -> str:
    mats = ",\n".join("    " + matrix_to_text(a) for a in ch.kraus)
    return f'{{\n  "dim": {ch.dim},\n  "kraus": [\n{mats}\n  ]\n}}\n'


def matrix_to_json(a: np.ndarray) -> dict:
    a = np.asarray(a, dtype=complex)
    return {"re": a.real.tolist(), "im": a.imag.tolist()}


def _number(v) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ChannelFileError(f"expected a number, got {v!r}")
    v = float(v)
    if not math.isfinite(v):
        raise ChannelFileError("non-finite number in channel file")
    return v


def _part(rows, dim: int, name: str) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != dim:
        raise ChannelFileError(f"'{name}' must be a list of {dim} rows")
    out = np.empty((dim, dim))
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise ChannelFileError(f"row {i} of '{name}' must have {dim} entries")
        out[i] = [_number(v) for v in row]
    return out


def from_obj(obj) -> KrausChannel:
    if not isinstance(obj, dict):
        raise ChannelFileError("top level must be an object")
    dim = obj.get("dim")
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise ChannelFileError("'dim' must be a positive integer")
    kraus = obj.get("kraus")
    if not isinstance(kraus, list) or not kraus:
        raise ChannelFileError("'kraus' must be a non-empty list")
    ops = []
    for k, entry in enumerate(kraus):
        if not isinstance(entry, dict) or set(entry) != {"re", "im"}:
            raise ChannelFileError(f"kraus[{k}] must be an object with 're' and 'im'")
        ops.append(_part(entry["re"], dim, "re") + 1j * _part(entry["im"], dim, "im"))
    return KrausChannel(ops)


def loads(text: str) -> KrausChannel:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ChannelFileError(f"invalid JSON: {exc}") from exc
    return from_obj(obj)


def read_channel(path) -> KrausChannel:
    """Raises ``OSError`` on I/O failure and ``ChannelFileError`` on bad content."""
    raw = Path(path).read_bytes()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ChannelFileError("channel file is not UTF-8") from exc
    return loads(text)


def write_channel(ch: KrausChannel, path) -> None:
    Path(path).write_text(dumps(ch), encoding="utf-8")
