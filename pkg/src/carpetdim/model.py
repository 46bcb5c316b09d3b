"""Carpet families: Bedford-McMullen grids and Lalley-Gatzouras row systems.

Both carpet types are frozen dataclasses produced by the ``validate_*``
functions. Lalley-Gatzouras parameters are kept as :class:`fractions.Fraction`
whenever the input allows it so that the strict inequalities between widths
and heights are checked exactly; plain floats are compared with
:data:`REAL_TOL`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence, Union

from .errors import (
    BaseOrderViolation,
    DigitOutOfRange,
    DuplicateCell,
    EmptyDigitSet,
    MassViolation,
    OverlapViolation,
    ParameterOutOfRange,
    SelfSimilarNotEmbeddable,
    WidthNotLessThanHeight,
)

Number = Union[Fraction, float]
Cell = tuple[int, int]

REAL_TOL = 1e-12


@dataclass(frozen=True)
class BMCarpet:
    """Bedford-McMullen carpet on an ``n`` (columns) by ``m`` (rows) grid.

    ``cells`` holds the digit pairs ``(x, y)`` sorted by ``(y, x)``.
    """

    n: int
    m: int
    cells: tuple[Cell, ...]

    @property
    def self_similar(self) -> bool:
        return self.n == self.m

    def __contains__(self, cell) -> bool:
        return tuple(cell) in self.cellset

    @cached_property
    def cellset(self) -> frozenset:
        return frozenset(self.cells)

    def row(self, y: int) -> tuple[int, ...]:
        """Columns occupied in row ``y``, ascending."""
        return tuple(x for x, yy in self.cells if yy == y)


@dataclass(frozen=True)
class RowStats:
    t_j: tuple[int, ...]
    s: int
    t: int
    a_total: int

    @property
    def uniform_fibers(self) -> bool:
        return all(tj in (0, self.t) for tj in self.t_j)


@dataclass(frozen=True)
class LGColumn:
    a: Number
    c: Number


@dataclass(frozen=True)
class LGRow:
    b: Number
    d: Number
    cols: tuple[LGColumn, ...]


@dataclass(frozen=True)
class LGCarpet:
    """Lalley-Gatzouras carpet, rows ascending in ``d``.

    Row ``i`` (1-based in reports, 0-based in ``rows``) is mapped by
    ``(x, y) -> (a_ij x + c_ij, b_i y + d_i)``.
    """

    rows: tuple[LGRow, ...]

    @property
    def exact(self) -> bool:
        return all(
            isinstance(r.b, Fraction)
            and isinstance(r.d, Fraction)
            and all(isinstance(c.a, Fraction) and isinstance(c.c, Fraction) for c in r.cols)
            for r in self.rows
        )

    @property
    def heights(self) -> tuple[Number, ...]:
        return tuple(r.b for r in self.rows)

    def maps(self) -> list[tuple[int, int, Number, Number, Number, Number]]:
        """All affine maps as ``(i, j, a, c, b, d)`` with 0-based indices."""
        return [
            (i, j, col.a, col.c, row.b, row.d)
            for i, row in enumerate(self.rows)
            for j, col in enumerate(row.cols)
        ]


# ---------------------------------------------------------------------------
# Bedford-McMullen


def validate_bm(n: int, m: int, cells: Iterable[Sequence[int]]) -> BMCarpet:
    """Validate grid bases and a digit set; return the carpet.

    Raises
    ------
    BaseOrderViolation
        if ``n < m``.
    EmptyDigitSet, DigitOutOfRange, DuplicateCell
        for bad digit sets.
    """
    if not isinstance(n, int) or not isinstance(m, int) or isinstance(n, bool) or isinstance(m, bool):
        raise ParameterOutOfRange(f"grid bases must be integers, got n={n!r}, m={m!r}")
    if n < 2 or m < 2:
        raise ParameterOutOfRange(f"grid bases must be >= 2, got n={n}, m={m}")
    if n < m:
        raise BaseOrderViolation(f"need n >= m, got n={n}, m={m}")
    seen: set[Cell] = set()
    for raw in cells:
        if len(raw) != 2:
            raise DigitOutOfRange(f"cell {raw!r} is not a digit pair")
        x, y = int(raw[0]), int(raw[1])
        if (x, y) != (raw[0], raw[1]):
            raise DigitOutOfRange(f"cell {raw!r} has non-integer digits")
        if not (0 <= x < n and 0 <= y < m):
            raise DigitOutOfRange(f"cell ({x}, {y}) outside {n}x{m} grid")
        if (x, y) in seen:
            raise DuplicateCell(f"cell ({x}, {y}) listed twice")
        seen.add((x, y))
    if not seen:
        raise EmptyDigitSet("digit set is empty")
    return BMCarpet(n, m, tuple(sorted(seen, key=lambda c: (c[1], c[0]))))


def bm_row_stats(carpet: BMCarpet) -> RowStats:
    t_j = [0] * carpet.m
    for _, y in carpet.cells:
        t_j[y] += 1
    s = sum(1 for v in t_j if v)
    return RowStats(tuple(t_j), s, max(t_j), len(carpet.cells))


def bm_touching(carpet: BMCarpet) -> bool:
    """True if two first-level rectangles of the carpet share a boundary point.

    Rectangles in the same column or row that are adjacent count, as do
    diagonal neighbours (corner contact).
    """
    cells = set(carpet.cells)
    for x, y in cells:
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                if (dx or dy) and (x + dx, y + dy) in cells:
                    return True
    return False


def embed_bm_as_lg(carpet: BMCarpet) -> LGCarpet:
    """The Bedford-McMullen maps written as a Lalley-Gatzouras system.

    Only occupied rows appear, ascending in ``y``.
    """
    n, m = carpet.n, carpet.m
    if n == m:
        raise SelfSimilarNotEmbeddable(f"n = m = {n}: widths would equal heights")
    rows = []
    for y in range(m):
        xs = carpet.row(y)
        if xs:
            cols = tuple(LGColumn(Fraction(1, n), Fraction(x, n)) for x in xs)
            rows.append(LGRow(Fraction(1, m), Fraction(y, m), cols))
    return LGCarpet(tuple(rows))


# ---------------------------------------------------------------------------
# Lalley-Gatzouras


def as_number(value) -> Number:
    """Coerce a spec value to an exact Fraction where possible.

    Integers, Fractions and strings (``"p/q"`` or decimal literals) become
    Fractions; floats stay floats.
    """
    if isinstance(value, bool):
        raise ParameterOutOfRange(f"not a number: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ParameterOutOfRange(f"not a rational or decimal literal: {value!r}") from None
    raise ParameterOutOfRange(f"not a number: {value!r}")


def _exact(*xs) -> bool:
    return all(isinstance(x, (int, Fraction)) for x in xs)


def _le(x, y) -> bool:
    # x <= y, with slack for floats
    return x <= y if _exact(x, y) else x <= y + REAL_TOL


def _lt(x, y) -> bool:
    # x < y, with a margin for floats
    return x < y if _exact(x, y) else x < y - REAL_TOL


def _raw_get(obj, key):
    if isinstance(obj, Mapping):
        return obj.get(key)
    return getattr(obj, key, None)


def validate_lg(rows) -> LGCarpet:
    """Validate a row description and return an :class:`LGCarpet`.

    ``rows`` is a sequence of mappings (or :class:`LGRow` objects) with keys
    ``b``, ``d`` and ``cols``; each column has ``a`` and ``c``. Rows are
    sorted by ``d`` and columns by ``c`` before the ordering constraints are
    checked. An :class:`LGCarpet` may be passed to re-validate it.
    """
    if isinstance(rows, LGCarpet):
        rows = rows.rows
    rows = list(rows)
    if not rows:
        raise EmptyDigitSet("carpet has no rows")

    parsed = []
    for i, raw in enumerate(rows):
        b, d = as_number(_raw_get(raw, "b")), as_number(_raw_get(raw, "d"))
        if not (_lt(0, b) and _lt(b, 1)):
            raise ParameterOutOfRange(f"row {i + 1}: height b={b} not in (0, 1)")
        if not _le(0, d):
            raise ParameterOutOfRange(f"row {i + 1}: offset d={d} is negative")
        cols = []
        for j, rc in enumerate(_raw_get(raw, "cols") or ()):
            cols.append((as_number(_raw_get(rc, "a")), as_number(_raw_get(rc, "c"))))
        parsed.append((b, d, cols))

    total_b = sum(b for b, _, _ in parsed)
    if not _le(total_b, 1):
        raise MassViolation(f"row heights sum to {total_b} > 1")

    parsed.sort(key=lambda r: r[1])
    for i, (b, d, cols) in enumerate(parsed):
        if not cols:
            raise EmptyDigitSet(f"row {i + 1} has no columns")
        for j, (a, c) in enumerate(cols):
            if not _lt(0, a):
                raise ParameterOutOfRange(f"row {i + 1}, column {j + 1}: width a={a} not positive")
            if not _le(0, c):
                raise ParameterOutOfRange(f"row {i + 1}, column {j + 1}: offset c={c} is negative")
            if not _lt(a, b):
                raise WidthNotLessThanHeight(
                    f"row {i + 1}, column {j + 1}: width a={a} not less than height b={b}"
                )
        total_a = sum(a for a, _ in cols)
        if not _le(total_a, 1):
            raise MassViolation(f"row {i + 1}: column widths sum to {total_a} > 1")

    for i in range(len(parsed) - 1):
        b, d, _ = parsed[i]
        if not _le(d + b, parsed[i + 1][1]):
            raise OverlapViolation(f"rows {i + 1} and {i + 2} overlap")
    b, d, _ = parsed[-1]
    if not _le(d + b, 1):
        raise OverlapViolation(f"row {len(parsed)} extends past 1")

    out = []
    for i, (b, d, cols) in enumerate(parsed):
        cols = sorted(cols, key=lambda ac: ac[1])
        for j in range(len(cols) - 1):
            a, c = cols[j]
            if not _le(c + a, cols[j + 1][1]):
                raise OverlapViolation(f"row {i + 1}: columns {j + 1} and {j + 2} overlap")
        a, c = cols[-1]
        if not _le(c + a, 1):
            raise OverlapViolation(f"row {i + 1}: column {len(cols)} extends past 1")
        out.append(LGRow(b, d, tuple(LGColumn(a, c) for a, c in cols)))
    return LGCarpet(tuple(out))


def lg_touching(carpet: LGCarpet) -> bool:
    """True if adjacent rows or adjacent columns within a row share an edge."""
    rows = carpet.rows
    for r0, r1 in zip(rows, rows[1:]):
        if r0.d + r0.b == r1.d:
            return True
    for row in rows:
        for c0, c1 in zip(row.cols, row.cols[1:]):
            if c0.c + c0.a == c1.c:
                return True
    return False
