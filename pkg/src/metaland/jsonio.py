"""Canonical JSON encoding used for every artifact this package writes.

Canonical means byte-stable: sorted keys, compact separators, floats via
``repr`` (shortest round-trip form), Decimals emitted as plain decimal
literals. Two structurally equal documents always serialize to the same
bytes, which is what makes snapshot digests and golden-file view tests
meaningful.

Reading money-bearing records uses ``loads_exact`` so fractional literals
come back as ``Decimal`` with no float rounding in between.
"""

from __future__ import annotations

import json
import math
import numbers
from datetime import date, datetime
from decimal import Decimal
from io import StringIO
from typing import IO, Any, Iterable, Iterator


def canonical_dumps(obj: Any) -> str:
    buf = StringIO()
    _write(obj, buf)
    return buf.getvalue()


def _write(obj: Any, buf: IO[str]) -> None:
    if type(obj).__module__ == "numpy":  # normalize numpy scalars
        obj = obj.item()
    if obj is None:
        buf.write("null")
    elif obj is True:
        buf.write("true")
    elif obj is False:
        buf.write("false")
    elif isinstance(obj, str):
        buf.write(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, numbers.Integral):
        buf.write(str(int(obj)))
    elif isinstance(obj, float) or isinstance(obj, numbers.Real) and not isinstance(obj, Decimal):
        value = float(obj)
        if math.isnan(value) or math.isinf(value):
            raise ValueError("non-finite float is not representable in JSON")
        buf.write(repr(value))
    elif isinstance(obj, Decimal):
        if not obj.is_finite():
            raise ValueError("non-finite Decimal is not representable in JSON")
        buf.write(format(obj, "f"))
    elif isinstance(obj, (datetime, date)):
        buf.write(json.dumps(_iso(obj)))
    elif isinstance(obj, dict):
        buf.write("{")
        first = True
        for key in sorted(obj):
            if not isinstance(key, str):
                raise TypeError(f"object keys must be str, got {type(key).__name__}")
            if not first:
                buf.write(",")
            first = False
            buf.write(json.dumps(key, ensure_ascii=False))
            buf.write(":")
            _write(obj[key], buf)
        buf.write("}")
    elif isinstance(obj, (list, tuple)):
        buf.write("[")
        for i, item in enumerate(obj):
            if i:
                buf.write(",")
            _write(item, buf)
        buf.write("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def _iso(obj) -> str:
    if isinstance(obj, datetime):
        ts = obj.isoformat()
        return ts.replace("+00:00", "Z")
    return obj.isoformat()


def loads(text: str) -> Any:
    return json.loads(text)


def loads_exact(text: str) -> Any:
    """Parse JSON keeping fractional numbers as Decimal."""
    return json.loads(text, parse_float=Decimal)


def dump_ndjson(records: Iterable[dict], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(canonical_dumps(rec))
            fh.write("\n")


def iter_ndjson(path, exact: bool = True) -> Iterator[tuple[int, Any]]:
    """Yield (1-based line number, parsed object) for every non-blank line."""
    load = loads_exact if exact else loads
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            yield lineno, load(line)
