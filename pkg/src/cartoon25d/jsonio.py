"""Deterministic JSON emission: floats at 17 significant digits (exact double
round-trip), stable key order, no locale dependence.  stdlib json handles
parsing; only the writer is custom."""

from __future__ import annotations

import json
import math
import numbers
from typing import Any

from .errors import ParseError


def format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite float {x!r}")
    return format(float(x), ".17g")


def _write(obj: Any, out: list[str], indent: int) -> None:
    pad = " " * indent
    if obj is None or obj is True or obj is False:
        out.append(json.dumps(obj))
    elif isinstance(obj, bool):  # pragma: no cover - caught above
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, numbers.Integral)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, numbers.Real)):
        out.append(format_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=True))
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(", ")
            _write(item, out, indent)
        out.append("]")
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, value) in enumerate(obj.items()):
            if i:
                out.append(",\n")
            out.append(pad + "  " + json.dumps(str(key), ensure_ascii=True) + ": ")
            _write(value, out, indent + 2)
        out.append("\n" + pad + "}")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any) -> str:
    out: list[str] = []
    _write(obj, out, 0)
    out.append("\n")
    return "".join(out)


def dump_bytes(obj: Any) -> bytes:
    return dumps(obj).encode("utf-8")


def loads(text: str | bytes) -> Any:
    try:
        if isinstance(text, bytes):
            text = text.decode("utf-8")
        return json.loads(text)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
