from fractions import Fraction as F

import pytest
from hypothesis import strategies as st

from carpetdim.model import validate_bm, validate_lg

S1_CELLS = [(0, 2), (1, 0), (2, 2), (3, 0), (3, 2)]
S2_CELLS = [(0, 0), (0, 2), (2, 1), (4, 0), (4, 2)]
LG1_ROWS = [
    {"b": F(1, 2), "d": 0, "cols": [{"a": F(1, 4), "c": 0}]},
    {"b": F(1, 4), "d": F(1, 2), "cols": [{"a": F(1, 8), "c": 0}, {"a": F(1, 8), "c": F(1, 2)}]},
]


def make_s1():
    return validate_bm(4, 3, S1_CELLS)


def make_s2():
    return validate_bm(5, 3, S2_CELLS)


def make_lg1():
    return validate_lg(LG1_ROWS)


def full_grid(n=4, m=3):
    return validate_bm(n, m, [(x, y) for x in range(n) for y in range(m)])


@pytest.fixture
def S1():
    return make_s1()


@pytest.fixture
def S2():
    return make_s2()


@pytest.fixture
def LG1():
    return make_lg1()


@st.composite
def bm_carpets(draw, max_n=7, strict=True):
    """Random valid Bedford-McMullen carpets with ``n > m`` (or ``n >= m``)."""
    m = draw(st.integers(2, max_n - 1))
    n = draw(st.integers(m + 1 if strict else m, max_n))
    grid = [(x, y) for x in range(n) for y in range(m)]
    cells = draw(st.lists(st.sampled_from(grid), min_size=1, max_size=len(grid), unique=True))
    return validate_bm(n, m, cells)


@st.composite
def lg_carpets(draw, max_rows=4, max_cols=4):
    """Random valid Lalley-Gatzouras carpets with rational parameters.

    Heights and widths are cut from a random partition of the unit interval so
    that the mass and offset constraints hold by construction.
    """
    rows_n = draw(st.integers(1, max_rows))
    den = draw(st.integers(rows_n + 1, 4 * rows_n + 8))
    # each row gets a slot of the unit interval; b sits inside its slot
    slot = F(1, rows_n)
    rows = []
    for i in range(rows_n):
        b = slot * F(draw(st.integers(1, den - 1)), den)
        d = slot * i
        cols_n = draw(st.integers(1, max_cols))
        cslot = F(1, cols_n)
        cols = []
        for j in range(cols_n):
            cap = min(cslot, b)
            # strictly below both the slot width and b
            a = cap * F(draw(st.integers(1, 9)), 10)
            cols.append({"a": a, "c": cslot * j})
        rows.append({"b": b, "d": d, "cols": cols})
    return validate_lg(rows)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
