import math

import mpmath
import pytest
from hypothesis import given

from carpetdim.dims import (
    DEGENERATE_FIBER,
    SELF_SIMILAR,
    TOUCHING_CELLS,
    UNIFORM_FIBERS,
    Conformal,
    bm_assouad,
    bm_conformal_assouad,
    bm_hausdorff,
    bm_minkowski,
    dimension_report,
    lg_assouad,
    lg_conformal_assouad,
)
from carpetdim.errors import SelfSimilarUnsupported
from carpetdim.model import bm_row_stats, embed_bm_as_lg, validate_bm, validate_lg
from carpetdim.moran import lg_minkowski_delta

from conftest import bm_carpets, full_grid

SIERPINSKI = [(x, y) for x in range(3) for y in range(3) if (x, y) != (1, 1)]


def test_hausdorff_s1_high_precision(S1):
    mpmath.mp.dps = 40
    theta = mpmath.log(3) / mpmath.log(4)
    expected = mpmath.log(2**theta + 3**theta) / mpmath.log(3)
    assert bm_hausdorff(S1) == pytest.approx(float(expected), abs=1e-13)


def test_hausdorff_trivial():
    assert bm_hausdorff(full_grid()) == pytest.approx(2.0, abs=1e-12)
    assert bm_hausdorff(validate_bm(4, 3, [(0, 0)])) == 0.0


def test_minkowski_values(S1):
    assert bm_minkowski(S1) == pytest.approx(math.log(2, 3) + math.log(2.5, 4), abs=1e-12)
    assert bm_minkowski(validate_bm(4, 3, [(0, 0)])) == 0.0


def test_assouad_values(S1, S2):
    assert bm_assouad(S1) == pytest.approx(math.log(2, 3) + math.log(3, 4), abs=1e-12)
    assert bm_assouad(S2) == pytest.approx(1 + math.log(2, 5), abs=1e-12)
    assert bm_assouad(validate_bm(3, 3, SIERPINSKI)) == pytest.approx(math.log(8, 3), abs=1e-12)


def test_conformal(S1, S2):
    assert bm_conformal_assouad(S1) == Conformal.zero()
    c2 = bm_conformal_assouad(S2)
    assert c2.kind == "minimal" and c2.value == pytest.approx(1 + math.log(2, 5), abs=1e-12)
    full_rows = validate_bm(4, 3, [(x, 0) for x in range(4)] + [(0, 2)])
    c = bm_conformal_assouad(full_rows)
    assert c.kind == "minimal" and c.value == pytest.approx(math.log(2, 3) + 1, abs=1e-12)
    with pytest.raises(SelfSimilarUnsupported):
        bm_conformal_assouad(validate_bm(3, 3, SIERPINSKI))
    assert str(Conformal.zero()) == "zero"
    assert str(c2).startswith("minimal(1.43067")


@given(bm_carpets())
def test_dimension_ordering(c):
    h, mk, a = bm_hausdorff(c), bm_minkowski(c), bm_assouad(c)
    st = bm_row_stats(c)
    assert h <= mk + 1e-12 and mk <= a + 1e-12
    if not st.uniform_fibers:
        assert h < mk - 1e-9 and mk < a - 1e-9
    # the gap between Assouad and Minkowski is log_n(st/|A|)
    assert a - mk == pytest.approx(math.log(st.s * st.t / st.a_total, c.n), abs=1e-12)
    assert (abs(a - mk) < 1e-12) == (st.a_total == st.s * st.t)


@given(bm_carpets())
def test_family_consistency(c):
    e = embed_bm_as_lg(c)
    assert abs(lg_assouad(e) - bm_assouad(c)) < 1e-10
    assert abs(lg_minkowski_delta(e) - bm_minkowski(c)) < 1e-10
    assert lg_conformal_assouad(e).kind == bm_conformal_assouad(c).kind


def test_lg_values(LG1, S2):
    assert lg_assouad(LG1) == pytest.approx(1 / 3 + 0.6942419136306174, abs=1e-10)
    assert lg_conformal_assouad(LG1).is_zero
    e2 = embed_bm_as_lg(S2)
    assert lg_assouad(e2) == pytest.approx(bm_assouad(S2), abs=1e-12)
    c = lg_conformal_assouad(e2)
    assert c.kind == "minimal" and c.value == pytest.approx(1 + math.log(2, 5), abs=1e-12)
    single = validate_lg([{"b": "1/2", "d": "0", "cols": [{"a": "1/4", "c": "0"}]}])
    assert lg_assouad(single) == 0.0
    full_height = validate_lg([
        {"b": "1/2", "d": "0", "cols": [{"a": "1/4", "c": "0"}]},
        {"b": "1/2", "d": "1/2", "cols": [{"a": "1/4", "c": "0"}]},
    ])
    assert lg_conformal_assouad(full_height).kind == "minimal"


def test_report_s1(S1):
    r = dimension_report(S1)
    assert r.family == "bedford-mcmullen"
    assert r.hausdorff < r.minkowski < r.assouad
    assert r.conformal_assouad.is_zero
    assert UNIFORM_FIBERS not in r.flags and TOUCHING_CELLS in r.flags
    rows = dict(r.rows())
    assert rows["assouad"] == "1.42341100393"
    assert rows["conformal_assouad"] == "zero"


def test_report_flags():
    uf = dimension_report(validate_bm(4, 3, [(0, 0), (2, 0), (1, 2), (3, 2)]))
    assert UNIFORM_FIBERS in uf.flags
    assert uf.minkowski == pytest.approx(uf.assouad, abs=1e-12)
    ss = dimension_report(validate_bm(3, 3, SIERPINSKI))
    assert SELF_SIMILAR in ss.flags and ss.conformal_assouad is None
    assert dict(ss.rows())["conformal_assouad"] == "unsupported"
    degenerate = dimension_report(validate_lg([{"b": "1/2", "d": "0", "cols": [{"a": "1/4", "c": "0"}]}]))
    assert DEGENERATE_FIBER in degenerate.flags


def test_report_lg1(LG1):
    r = dimension_report(LG1)
    assert r.hausdorff is None
    assert r.conformal_assouad.is_zero
    assert r.details["i_star"] == 2
    assert dict(r.rows())["hausdorff"] == "absent"
