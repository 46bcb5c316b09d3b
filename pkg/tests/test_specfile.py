import json
from fractions import Fraction as F

import pytest
from hypothesis import given

from carpetdim.dims import dimension_report
from carpetdim.errors import DigitOutOfRange, SpecFormatError, WidthNotLessThanHeight
from carpetdim.model import BMCarpet, validate_lg
from carpetdim.specfile import (
    LG_TANGENT_TYPE,
    dump_spec,
    load_spec,
    parse_spec,
    tangent_document,
    write_spec,
)

from conftest import bm_carpets, lg_carpets

S1_DOC = {"type": "bedford-mcmullen", "n": 4, "m": 3, "cells": [[0, 2], [1, 0], [2, 2], [3, 0], [3, 2]]}


def test_load_bm(tmp_path, S1):
    p = tmp_path / "s1.json"
    p.write_text(json.dumps(S1_DOC))
    assert load_spec(p) == S1


def test_load_lg_strings_and_decimals(tmp_path, LG1):
    doc = {"type": "lalley-gatzouras", "rows": [
        {"b": "0.5", "d": 0, "cols": [{"a": "1/4", "c": "0"}]},
        {"b": "1/4", "d": "1/2", "cols": [{"a": "0.125", "c": 0}, {"a": "1/8", "c": "0.5"}]},
    ]}
    p = tmp_path / "lg.json"
    p.write_text(json.dumps(doc))
    assert load_spec(p) == LG1


@given(bm_carpets(strict=False))
def test_bm_round_trip(c):
    assert parse_spec(json.loads(json.dumps(dump_spec(c)))) == c


@given(lg_carpets())
def test_lg_round_trip(c):
    assert parse_spec(json.loads(json.dumps(dump_spec(c)))) == c


def test_float_round_trip():
    c = validate_lg([{"b": 0.3, "d": 0.1, "cols": [{"a": 0.2, "c": 0.05}]}])
    assert parse_spec(json.loads(json.dumps(dump_spec(c)))) == c


@pytest.mark.parametrize(
    "text, needle",
    [
        ('{"type": "bedford-mcmullen",\n  "n": 4,,}', "line 2 column"),
        ('[1, 2]', "top level"),
        ('{"type": "sponge"}', "field 'type'"),
        ('{"type": "bedford-mcmullen", "n": "4", "m": 3, "cells": []}', "field 'n'"),
        ('{"type": "bedford-mcmullen", "n": 4, "m": 3, "cells": [[0, 2], [1]]}', "field 'cells[1]'"),
        ('{"type": "bedford-mcmullen", "n": 4, "m": 3, "cells": {}}', "field 'cells'"),
        ('{"type": "lalley-gatzouras", "rows": [{"b": "x", "d": 0, "cols": []}]}', "field 'rows[0].b'"),
        ('{"type": "lalley-gatzouras", "rows": [{"b": "1/2", "d": 0, "cols": [{"c": 0}]}]}',
         "field 'rows[0].cols[0].a'"),
    ],
)
def test_format_errors(tmp_path, text, needle):
    p = tmp_path / "bad.json"
    p.write_text(text)
    with pytest.raises(SpecFormatError) as exc:
        load_spec(p)
    assert "bad.json" in str(exc.value)
    assert needle in str(exc.value)


def test_validation_errors_name_file(tmp_path):
    p = tmp_path / "range.json"
    p.write_text('{"type": "bedford-mcmullen", "n": 4, "m": 3, "cells": [[0, 5]]}')
    with pytest.raises(DigitOutOfRange, match="range.json"):
        load_spec(p)
    p = tmp_path / "wide.json"
    p.write_text('{"type": "lalley-gatzouras", "rows": [{"b": "1/2", "d": 0, "cols": [{"a": "1/2", "c": 0}]}]}')
    with pytest.raises(WidthNotLessThanHeight, match="wide.json"):
        load_spec(p)


def test_missing_file(tmp_path):
    with pytest.raises(SpecFormatError, match="nope.json"):
        load_spec(tmp_path / "nope.json")


def test_write_spec_deterministic(tmp_path, S1):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    write_spec(a, S1)
    write_spec(b, S1)
    assert a.read_bytes() == b.read_bytes()
    assert load_spec(a) == S1


def test_tangent_documents(S2, LG1):
    doc = tangent_document(S2)
    t = parse_spec(doc)
    assert isinstance(t, BMCarpet)
    assert dimension_report(t).assouad == pytest.approx(dimension_report(S2).assouad, abs=1e-12)

    lg_doc = tangent_document(LG1)
    assert lg_doc["type"] == "lalley-gatzouras"
    assert dimension_report(parse_spec(lg_doc)).assouad == pytest.approx(dimension_report(LG1).assouad, abs=1e-12)


def test_lg_tangent_generator_fallback():
    # row-2 widths (3/10) are not below the first row height (1/4): no product carpet
    c = validate_lg([
        {"b": F(1, 4), "d": 0, "cols": [{"a": F(1, 5), "c": 0}]},
        {"b": F(1, 2), "d": F(1, 2), "cols": [{"a": F(3, 10), "c": 0}, {"a": F(3, 10), "c": F(1, 2)}]},
    ])
    doc = tangent_document(c)
    assert doc["type"] == LG_TANGENT_TYPE
    assert doc["i_star"] == 2
    assert doc["x_maps"] == [{"a": "3/10", "c": "0"}, {"a": "3/10", "c": "1/2"}]
    with pytest.raises(SpecFormatError):
        parse_spec(doc)
