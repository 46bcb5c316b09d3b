"""JSON carpet spec files.

Two document types are understood::

    {"type": "bedford-mcmullen", "n": 4, "m": 3, "cells": [[0, 2], [1, 0]]}
    {"type": "lalley-gatzouras",
     "rows": [{"b": "1/2", "d": "0", "cols": [{"a": "1/4", "c": "0"}]}]}

Lalley-Gatzouras parameters may be ``"p/q"`` strings, decimal strings or JSON
numbers. Every error message names the file and the offending field.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Union

from .errors import CarpetError, ParameterOutOfRange, SpecFormatError
from .model import BMCarpet, LGCarpet, as_number, validate_bm, validate_lg
from .tangent import LGTangent, lg_tangent, tangent_carpet, tangent_digits

BM_TYPE = "bedford-mcmullen"
LG_TYPE = "lalley-gatzouras"
LG_TANGENT_TYPE = "lalley-gatzouras-tangent"

Carpet = Union[BMCarpet, LGCarpet]


def _fail(source: str, field: str, msg: str):
    raise SpecFormatError(f"{source}: field '{field}': {msg}")


def _int(source, field, v) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        _fail(source, field, f"expected an integer, got {v!r}")
    return v


def _num(source, field, v):
    if v is None:
        _fail(source, field, "missing")
    try:
        return as_number(v)
    except ParameterOutOfRange as exc:
        _fail(source, field, str(exc))


def _list(source, field, v) -> list:
    if not isinstance(v, list):
        _fail(source, field, f"expected a list, got {type(v).__name__}")
    return v


def parse_spec(doc: Any, source: str = "<spec>") -> Carpet:
    """Validate a decoded spec document and build the carpet."""
    if not isinstance(doc, dict):
        _fail(source, "$", "top level must be an object")
    kind = doc.get("type")
    try:
        if kind == BM_TYPE:
            n = _int(source, "n", doc.get("n"))
            m = _int(source, "m", doc.get("m"))
            cells = []
            for i, c in enumerate(_list(source, "cells", doc.get("cells"))):
                if not isinstance(c, list) or len(c) != 2:
                    _fail(source, f"cells[{i}]", f"expected [x, y], got {c!r}")
                cells.append((_int(source, f"cells[{i}][0]", c[0]), _int(source, f"cells[{i}][1]", c[1])))
            return validate_bm(n, m, cells)
        if kind == LG_TYPE:
            rows = []
            for i, row in enumerate(_list(source, "rows", doc.get("rows"))):
                if not isinstance(row, dict):
                    _fail(source, f"rows[{i}]", "expected an object")
                cols = []
                for j, col in enumerate(_list(source, f"rows[{i}].cols", row.get("cols"))):
                    if not isinstance(col, dict):
                        _fail(source, f"rows[{i}].cols[{j}]", "expected an object")
                    cols.append({k: _num(source, f"rows[{i}].cols[{j}].{k}", col.get(k)) for k in ("a", "c")})
                rows.append({"b": _num(source, f"rows[{i}].b", row.get("b")),
                             "d": _num(source, f"rows[{i}].d", row.get("d")), "cols": cols})
            return validate_lg(rows)
    except SpecFormatError:
        raise
    except CarpetError as exc:
        raise type(exc)(f"{source}: {exc}") from None
    _fail(source, "type", f"expected {BM_TYPE!r} or {LG_TYPE!r}, got {kind!r}")


def load_spec(path: Union[str, Path]) -> Carpet:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise SpecFormatError(f"{path}: no such file") from None
    except (OSError, UnicodeDecodeError) as exc:
        raise SpecFormatError(f"{path}: cannot read ({exc})") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFormatError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_spec(doc, str(path))


def _fmt(v) -> Union[str, float]:
    if isinstance(v, Fraction):
        return str(v)
    return v


def dump_spec(carpet: Carpet) -> dict:
    if isinstance(carpet, BMCarpet):
        return {"type": BM_TYPE, "n": carpet.n, "m": carpet.m,
                "cells": [list(c) for c in carpet.cells]}
    return {"type": LG_TYPE, "rows": [
        {"b": _fmt(r.b), "d": _fmt(r.d), "cols": [{"a": _fmt(c.a), "c": _fmt(c.c)} for c in r.cols]}
        for r in carpet.rows
    ]}


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def write_spec(path: Union[str, Path], carpet: Carpet) -> None:
    Path(path).write_text(dumps(dump_spec(carpet)), encoding="utf-8")


def tangent_document(carpet: Carpet) -> dict:
    """Spec document of the weak tangent ``C_x x C_y``.

    A Bedford-McMullen carpet yields the product digit set. For a
    Lalley-Gatzouras carpet the product of the row-``i*`` column maps with all
    row maps is emitted as a carpet when it satisfies the carpet constraints,
    otherwise as a generator document.
    """
    if isinstance(carpet, BMCarpet):
        spec = tangent_digits(carpet)
        return dump_spec(tangent_carpet(spec, carpet.n, carpet.m))
    tan = lg_tangent(carpet)
    try:
        return dump_spec(lg_product_carpet(tan))
    except CarpetError:
        return {
            "type": LG_TANGENT_TYPE,
            "i_star": tan.i_star,
            "x_maps": [{"a": _fmt(a), "c": _fmt(c)} for a, c in tan.x_maps],
            "y_maps": [{"b": _fmt(b), "d": _fmt(d)} for b, d in tan.y_maps],
        }


def lg_product_carpet(tan: LGTangent) -> LGCarpet:
    """Every row map paired with every row-``i*`` column map, validated."""
    return validate_lg([
        {"b": b, "d": d, "cols": [{"a": a, "c": c} for a, c in tan.x_maps]}
        for b, d in tan.y_maps
    ])
