"""JSON matrix and pair documents.

Entries are serialized as strings (``"3"``, ``"-1/2"``, residues over GF(p))
so arbitrary-precision rationals survive the trip exactly::

    {
      "field": "rational",
      "matrix": [
        ["0", "1"],
        ["0", "0"]
      ]
    }

A pair document carries ``"m"`` and ``"n"`` grids instead of ``"matrix"``.
"""

from __future__ import annotations

import json
from typing import Any

from .exceptions import WeyrFormError
from .fields import Field
from .linalg import Matrix
from .normal_form import CommutingPair


class DocumentError(WeyrFormError, ValueError):
    """Malformed matrix or pair document."""


def _field_of(doc: dict) -> Field:
    try:
        return Field.parse(str(doc.get("field", "rational")))
    except ValueError as exc:
        raise DocumentError(str(exc)) from None


def parse_grid(grid: Any, field: Field, name: str = "matrix") -> Matrix:
    if not isinstance(grid, list) or not all(isinstance(r, list) for r in grid):
        raise DocumentError(f"{name!r} must be a list of rows")
    rows = []
    for row in grid:
        parsed = []
        for x in row:
            if isinstance(x, bool) or not isinstance(x, (str, int)):
                raise DocumentError(f"{name!r} entries must be strings or integers, got {x!r}")
            try:
                parsed.append(field.element(x))
            except (ValueError, TypeError, ZeroDivisionError) as exc:
                raise DocumentError(f"bad entry {x!r} in {name!r}: {exc}") from None
        rows.append(parsed)
    try:
        return Matrix._wrap(rows, field, len(rows[0]) if rows else 0)
    except ValueError as exc:
        raise DocumentError(f"{name!r}: {exc}") from None


def matrix_to_document(m: Matrix) -> dict:
    return {"field": str(m.field), "matrix": m.to_strings()}


def matrix_from_document(doc: Any) -> Matrix:
    if not isinstance(doc, dict) or "matrix" not in doc:
        raise DocumentError("matrix document needs a 'matrix' key")
    return parse_grid(doc["matrix"], _field_of(doc))


def pair_to_document(pair: CommutingPair) -> dict:
    return {"field": str(pair.field), "m": pair.m.to_strings(), "n": pair.n.to_strings()}


def pair_from_document(doc: Any) -> CommutingPair:
    if not isinstance(doc, dict) or "m" not in doc or "n" not in doc:
        raise DocumentError("pair document needs 'm' and 'n' keys")
    field = _field_of(doc)
    m = parse_grid(doc["m"], field, "m")
    n = parse_grid(doc["n"], field, "n")
    try:
        return CommutingPair(m, n)
    except ValueError as exc:
        raise DocumentError(str(exc)) from None


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from None


def _encode(obj: Any, indent: int) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k), ensure_ascii=False)}: {_encode(v, indent + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(x, (dict, list)) for x in obj):
            return json.dumps(obj, ensure_ascii=False)
        return "[\n" + ",\n".join(inner + _encode(x, indent + 1) for x in obj) + "\n" + pad + "]"
    return json.dumps(obj, ensure_ascii=False)


def dumps(doc: Any) -> str:
    """Canonical text: one matrix row per line, trailing newline."""
    return _encode(doc, 0) + "\n"
