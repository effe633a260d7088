"""JSON definitions and reports.

Matroid definition documents::

    {"type": "uniform", "r": 2, "n": 4}
    {"type": "graphic", "vertices": 3, "edges": [[0, 1], [1, 2], [0, 2]]}
    {"type": "linear", "p": 2, "matrix": [[1, 0, 1], [0, 1, 1]]}
    {"type": "transversal", "sets": [[0, 1], [2, 3]], "n": 4}        # "n" optional
    {"type": "dual", "inner": {...}}
    {"type": "direct_sum", "left": {...}, "right": {...}}
    {"type": "minor", "inner": {...}, "deleted": [0], "contracted": [1]}
    {"type": "explicit", "bases": [[0, 1], [0, 2]], "n": 3}          # "n" optional

Any matroid document may carry ``"labels": [...]`` (presentation only, not
part of the fingerprint).  Polymatroid documents are ``{"n": 2, "bases":
[[2, 0], [1, 1]]}``, optionally with ``"type": "polymatroid"``.
"""

from __future__ import annotations

import json
from typing import Any, Union

from .bits import to_mask
from .conjectures import DiscretePolymatroid
from .core import (
    GroundSet,
    Matroid,
    direct_sum,
    dual,
    explicit,
    graphic,
    linear,
    minor,
    transversal,
    uniform,
)
from .errors import InvalidParameter, ParseError

SCHEMA_VERSION = 1

_REQUIRED = {
    "uniform": ("r", "n"),
    "graphic": ("vertices", "edges"),
    "linear": ("p", "matrix"),
    "transversal": ("sets",),
    "dual": ("inner",),
    "direct_sum": ("left", "right"),
    "minor": ("inner",),
    "explicit": ("bases",),
}


def _int(doc, key, path):
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(f"expected an integer, got {v!r}", f"{path}.{key}")
    return v


def _int_list(v, path):
    if not isinstance(v, list) or any(isinstance(x, bool) or not isinstance(x, int) for x in v):
        raise ParseError("expected a list of integers", path)
    return v


def _int_matrix(doc, key, path):
    v = doc[key]
    if not isinstance(v, list):
        raise ParseError("expected a list of lists", f"{path}.{key}")
    return [_int_list(row, f"{path}.{key}[{i}]") for i, row in enumerate(v)]


def _build(doc: Any, path: str) -> Matroid:
    if not isinstance(doc, dict):
        raise ParseError("expected an object", path)
    kind = doc.get("type")
    if kind not in _REQUIRED:
        raise ParseError(f"unknown matroid type {kind!r}", f"{path}.type")
    for key in _REQUIRED[kind]:
        if key not in doc:
            raise ParseError(f"missing field {key!r}", path)
    try:
        if kind == "uniform":
            m = uniform(_int(doc, "r", path), _int(doc, "n", path))
        elif kind == "graphic":
            m = graphic(_int(doc, "vertices", path), _int_matrix(doc, "edges", path))
        elif kind == "linear":
            m = linear(_int(doc, "p", path), _int_matrix(doc, "matrix", path))
        elif kind == "transversal":
            n = _int(doc, "n", path) if "n" in doc else None
            m = transversal(_int_matrix(doc, "sets", path), n)
        elif kind == "dual":
            m = dual(_build(doc["inner"], f"{path}.inner"))
        elif kind == "direct_sum":
            m = direct_sum(_build(doc["left"], f"{path}.left"), _build(doc["right"], f"{path}.right"))
        elif kind == "minor":
            inner = _build(doc["inner"], f"{path}.inner")
            deleted = _int_list(doc.get("deleted", []), f"{path}.deleted")
            contracted = _int_list(doc.get("contracted", []), f"{path}.contracted")
            m = minor(inner, deleted, contracted)
        else:
            n = _int(doc, "n", path) if "n" in doc else None
            m = explicit(_int_matrix(doc, "bases", path), n)
    except ParseError:
        raise
    except InvalidParameter as exc:
        # keep ValidationError's witness; everything else gets a location
        if type(exc) is InvalidParameter:
            raise ParseError(str(exc), path) from exc
        raise
    if "labels" in doc:
        labels = doc["labels"]
        if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
            raise ParseError("labels must be a list of strings", f"{path}.labels")
        try:
            m.ground = GroundSet(m.size, tuple(labels))
        except InvalidParameter as exc:
            raise ParseError(str(exc), f"{path}.labels") from exc
    return m


def parse_polymatroid(doc: Any, path: str = "$") -> DiscretePolymatroid:
    if not isinstance(doc, dict) or "n" not in doc or "bases" not in doc:
        raise ParseError("polymatroid needs fields 'n' and 'bases'", path)
    n = _int(doc, "n", path)
    vectors = _int_matrix(doc, "bases", path)
    try:
        return DiscretePolymatroid(n, tuple(tuple(v) for v in vectors))
    except InvalidParameter as exc:
        if type(exc) is InvalidParameter:
            raise ParseError(str(exc), path) from exc
        raise


def parse_definition(text: Union[str, bytes, dict]) -> Union[Matroid, DiscretePolymatroid]:
    """Build a matroid oracle (or a polymatroid) from a definition document."""
    if isinstance(text, (str, bytes)):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg} at line {exc.lineno}") from exc
    else:
        doc = text
    if isinstance(doc, dict) and (doc.get("type") == "polymatroid" or ("type" not in doc and "bases" in doc)):
        return parse_polymatroid(doc)
    return _build(doc, "$")


def parse_sets(text: Union[str, list], what: str = "sets") -> list[int]:
    """``"[[0,1],[2,3]]"`` (or an already-decoded list) to a list of bitmasks."""
    doc = json.loads(text) if isinstance(text, str) else text
    if not isinstance(doc, list):
        raise ParseError(f"{what} must be a list of element lists")
    return [to_mask(_int_list(s, f"$[{i}]")) for i, s in enumerate(doc)]


def parse_set(text: Union[str, list]) -> int:
    doc = json.loads(text) if isinstance(text, str) else text
    return to_mask(_int_list(doc, "$"))


def emit_report(result: dict, matroid_sha: str = None) -> str:
    """Schema-stamped JSON text; key order is fixed so equal results give equal bytes."""
    doc = dict(result)
    doc.setdefault("schema_version", SCHEMA_VERSION)
    if matroid_sha is not None:
        doc.setdefault("matroid_sha", matroid_sha)
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
