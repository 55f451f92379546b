"""Canonical structured-text encoding.

One encoding rule shared by content packs, save documents, wire messages,
and machine reports: key-sorted JSON, UTF-8, minimal separators, and no
floating point anywhere.  Identical values always produce identical bytes,
which is what makes byte-equality a usable test oracle.
"""

from __future__ import annotations

import json
from typing import Any


def _reject_floats(value: Any, path: str = "$") -> None:
    if isinstance(value, float):
        raise ValueError(f"float at {path} not allowed in canonical form")
    if isinstance(value, dict):
        for key, item in value.items():
            if not isinstance(key, str):
                raise ValueError(f"non-string key at {path}: {key!r}")
            _reject_floats(item, f"{path}.{key}")
    elif isinstance(value, (list, tuple)):
        for i, item in enumerate(value):
            _reject_floats(item, f"{path}[{i}]")


def canonical_bytes(value: Any) -> bytes:
    """Encode ``value`` canonically, rejecting floats and non-string keys."""
    _reject_floats(value)
    text = json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return text.encode("utf-8")


def _no_float(_: str) -> float:
    raise ValueError("float values are not allowed")


def parse_canonical(data: bytes) -> Any:
    """Decode canonical text, refusing floats, NaN, and Infinity."""
    text = data.decode("utf-8")
    return json.loads(text, parse_float=_no_float, parse_constant=_no_float)
