"""Weak tangents of carpets along the fullest row.

Zooming into the approximate squares ``R_k(p_k, q_k)`` whose digits all
repeat a cell ``(x*, y*)`` of the fullest row produces windows that converge
to the product carpet ``C_x x C_y``. Windows are discretised as
:class:`CellSet` grids; distances between them are Hausdorff distances of cell
centres, with the cell diagonal reported as the discretisation slack.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from .counting import level_split
from .errors import AmbientMismatch, BudgetExceeded, ParameterOutOfRange
from .model import BMCarpet, LGCarpet, Number, bm_row_stats, validate_bm
from .moran import lg_beta_x, lg_beta_y

CELL_BUDGET = 4_000_000


@dataclass(frozen=True)
class TangentSpec:
    y_star: int
    x_star: int
    cx_digits: tuple[int, ...]
    cy_digits: tuple[int, ...]

    @property
    def A_prime(self) -> tuple[tuple[int, int], ...]:
        return tuple((x, y) for y in self.cy_digits for x in self.cx_digits)


def tangent_digits(carpet: BMCarpet) -> TangentSpec:
    """Digit data of the tangent: smallest fullest row, smallest column in it."""
    stats = bm_row_stats(carpet)
    y_star = stats.t_j.index(stats.t)
    cx = carpet.row(y_star)
    cy = tuple(y for y in range(carpet.m) if stats.t_j[y])
    return TangentSpec(y_star, cx[0], cx, cy)


def tangent_carpet(spec: TangentSpec, n: int, m: int) -> BMCarpet:
    return validate_bm(n, m, spec.A_prime)


@dataclass(frozen=True)
class CellSet:
    """Occupied cells of an ``nx`` by ``ny`` grid over ``[0, width] x [0, height]``."""

    level: int
    nx: int
    ny: int
    cells: frozenset
    width: Number = Fraction(1)
    height: Number = Fraction(1)

    @property
    def cell_width(self) -> float:
        return float(self.width) / self.nx

    @property
    def cell_height(self) -> float:
        return float(self.height) / self.ny

    @property
    def diameter(self) -> float:
        """Diagonal of one cell: the discretisation slack."""
        return math.hypot(self.cell_width, self.cell_height)

    def centers(self) -> np.ndarray:
        idx = np.array(list(self.cells), dtype=np.float64).reshape(-1, 2)
        return (idx + 0.5) * np.array([self.cell_width, self.cell_height])

    def __len__(self):
        return len(self.cells)


def _grow(states: np.ndarray, pairs, use_x: bool, use_y: bool, n: int, m: int, budget: int) -> np.ndarray:
    proj = np.array(sorted({(x if use_x else 0, y if use_y else 0) for x, y in pairs}), dtype=np.int64)
    if len(states) * len(proj) > 4 * budget:
        raise BudgetExceeded(f"more than {budget} cells")
    X = states[:, None, 0] * (n if use_x else 1) + proj[None, :, 0]
    Y = states[:, None, 1] * (m if use_y else 1) + proj[None, :, 1]
    out = np.unique(np.stack([X.ravel(), Y.ravel()], axis=1), axis=0)
    if len(out) > budget:
        raise BudgetExceeded(f"more than {budget} cells")
    return out


def _window_states(carpet: BMCarpet, k: int, x_depth: int, y_depth: int, budget: int) -> frozenset:
    """Cells of the rescaled window at ``R_k(p_k, q_k)``.

    Window column digit ``j`` is carpet position ``l + j``; window row digit
    ``j`` is carpet position ``k + j``.
    """
    n, m = carpet.n, carpet.m
    spec = tangent_digits(carpet)
    l = level_split(k, n, m)
    fixed_row = [(x, spec.y_star) for x in spec.cx_digits]
    states = np.zeros((1, 2), dtype=np.int64)
    last = max(l + x_depth, k + y_depth)
    for pos in range(l + 1, last + 1):
        use_x = pos - l <= x_depth
        use_y = 1 <= pos - k <= y_depth
        if not (use_x or use_y):
            continue
        pairs = fixed_row if pos <= k else carpet.cells
        states = _grow(states, pairs, use_x, use_y, n, m, budget)
    return frozenset(map(tuple, states.tolist()))


def window_width(carpet: BMCarpet, k: int) -> Fraction:
    """Exact aspect ratio ``m^k / n^l`` of a level-``k`` approximate square."""
    return Fraction(carpet.m**k, carpet.n ** level_split(k, carpet.n, carpet.m))


def zoom_window(carpet: BMCarpet, k: int, resolution: int, budget: int = CELL_BUDGET) -> CellSet:
    """Window ``f_k(S) within [0, m^k n^-l] x [0, 1]`` at sub-level ``resolution``.

    Cells are the level-``k + resolution`` approximate squares inside
    ``R_k(p_k, q_k)`` that meet the carpet, in window coordinates.
    """
    n, m = carpet.n, carpet.m
    if n <= m:
        raise ParameterOutOfRange("zoom windows need n > m")
    if k < 1 or resolution < 0:
        raise ParameterOutOfRange("need k >= 1 and resolution >= 0")
    l = level_split(k, n, m)
    x_depth = level_split(k + resolution, n, m) - l
    cells = _window_states(carpet, k, x_depth, resolution, budget)
    return CellSet(k + resolution, n**x_depth, m**resolution, cells,
                   window_width(carpet, k), Fraction(1))


def normalized_window(carpet: BMCarpet, k: int, gx: int, gy: int, budget: int = CELL_BUDGET) -> CellSet:
    """Zoom window rescaled horizontally to the unit square, on an ``n^gx x m^gy`` grid."""
    cells = _window_states(carpet, k, gx, gy, budget)
    return CellSet(k, carpet.n**gx, carpet.m**gy, cells)


def product_cells(carpet: BMCarpet, gx: int, gy: int, budget: int = CELL_BUDGET) -> CellSet:
    """The product Cantor set ``C_x x C_y`` on an ``n^gx x m^gy`` grid."""
    spec = tangent_digits(carpet)
    if len(spec.cx_digits) ** gx * len(spec.cy_digits) ** gy > budget:
        raise BudgetExceeded("product grid exceeds cell budget")
    xs, ys = [0], [0]
    for _ in range(gx):
        xs = [X * carpet.n + x for X in xs for x in spec.cx_digits]
    for _ in range(gy):
        ys = [Y * carpet.m + y for Y in ys for y in spec.cy_digits]
    return CellSet(0, carpet.n**gx, carpet.m**gy, frozenset((X, Y) for X in xs for Y in ys))


def hausdorff_distance(a: CellSet, b: CellSet) -> float:
    """Hausdorff distance between the cell centres of two cell sets."""
    if a.width != b.width or a.height != b.height:
        raise AmbientMismatch(
            f"ambient {a.width}x{a.height} differs from {b.width}x{b.height}"
        )
    if not a.cells or not b.cells:
        raise ParameterOutOfRange("Hausdorff distance of an empty cell set")
    ca, cb = a.centers(), b.centers()
    # max-reduction is order independent, so cell order does not matter
    d_ab = cKDTree(cb).query(ca, workers=-1)[0].max()
    d_ba = cKDTree(ca).query(cb, workers=-1)[0].max()
    return float(max(d_ab, d_ba))


@dataclass
class TangentConvergence:
    rows: list[dict]
    decay_ratio: Optional[float]
    slack: float

    @property
    def ok(self) -> bool:
        return all(r["ok"] for r in self.rows)


def _default_grid(carpet: BMCarpet, k_max: int) -> tuple[int, int]:
    # cell sides below 1/50 of the k_max bound scale
    target = 0.02 * (carpet.m / carpet.n) ** k_max
    gx = max(1, math.ceil(-math.log(target) / math.log(carpet.n)))
    gy = max(1, math.ceil(-math.log(target) / math.log(carpet.m)))
    return gx, gy


def verify_tangent_convergence(
    carpet: BMCarpet, k_max: int, gx: Optional[int] = None, gy: Optional[int] = None,
    budget: int = CELL_BUDGET,
) -> TangentConvergence:
    """Distances from the normalised zoom windows to ``C_x x C_y``, ``k = 1..k_max``.

    Each distance is checked against ``2 (m/n)^k + 2 * slack`` and a
    geometric decay ratio is fitted to the positive distances.
    """
    n, m = carpet.n, carpet.m
    if n <= m:
        raise ParameterOutOfRange("tangent convergence needs n > m")
    if gx is None or gy is None:
        gx, gy = _default_grid(carpet, k_max)
    target = product_cells(carpet, gx, gy, budget)
    slack = target.diameter
    rows = []
    for k in range(1, k_max + 1):
        window = normalized_window(carpet, k, gx, gy, budget)
        d = hausdorff_distance(window, target)
        bound = 2 * (m / n) ** k
        rows.append({"k": k, "l": level_split(k, n, m), "distance": d, "bound": bound,
                     "slack": slack, "ok": d <= bound + 2 * slack})
    ks = [r["k"] for r in rows if r["distance"] > slack]
    ds = [r["distance"] for r in rows if r["distance"] > slack]
    ratio = float(math.exp(np.polyfit(ks, np.log(ds), 1)[0])) if len(ks) >= 2 else None
    return TangentConvergence(rows, ratio, slack)


@dataclass(frozen=True)
class LGTangent:
    i_star: int
    x_maps: tuple[tuple[Number, Number], ...]
    y_maps: tuple[tuple[Number, Number], ...]
    beta_x: float
    beta_y: float


def lg_tangent(carpet: LGCarpet) -> LGTangent:
    """Generators of ``C_x`` (row ``i*`` widths and offsets) and ``C_y`` (all rows)."""
    i_star, bx = lg_beta_x(carpet)
    row = carpet.rows[i_star - 1]
    return LGTangent(
        i_star,
        tuple((c.a, c.c) for c in row.cols),
        tuple((r.b, r.d) for r in carpet.rows),
        bx,
        lg_beta_y(carpet),
    )
