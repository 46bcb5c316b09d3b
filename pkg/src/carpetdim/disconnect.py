"""Empirical uniform-disconnectedness checks on approximate-square graphs.

Vertices are level-``k`` approximate squares meeting the carpet; two are
joined when the Euclidean gap between the closed rectangles is at most the
chain step ``delta``. Any ``delta``-chain of carpet points induces a chain in
this graph, so "no escape in the graph" is a conservative witness that no
point chain escapes either. Conversely a graph escape yields a point chain
with steps at most ``delta + 2 * diam``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .counting import approx_square_count, level_split
from .errors import BudgetExceeded, ParameterOutOfRange
from .model import BMCarpet, LGCarpet, bm_row_stats
from .tangent import tangent_digits

GRAPH_BUDGET = 2_000_000
LADDER_STEPS = 20
EXHAUSTIVE_LEVEL = 6
START_SAMPLES = 256
ESCAPE_SAMPLES = 32


class CellGrid:
    """Occupancy oracle for level-``k`` approximate squares, vectorised."""

    def __init__(self, carpet: BMCarpet, k: int):
        self.carpet = carpet
        self.k = k
        self.l = level_split(k, carpet.n, carpet.m)
        self.nx = carpet.n**self.l
        self.ny = carpet.m**k
        if self.nx * self.ny > 2**62:
            raise BudgetExceeded(f"level {k} grid too large for 64-bit indices")
        self.w = 1.0 / self.nx
        self.h = 1.0 / self.ny
        table = np.zeros((carpet.n, carpet.m), dtype=bool)
        for x, y in carpet.cells:
            table[x, y] = True
        self.table = table
        self.row_ok = table.any(axis=0)

    @property
    def diameter(self) -> float:
        return math.hypot(self.w, self.h)

    def occupied(self, p: np.ndarray, q: np.ndarray) -> np.ndarray:
        n, m = self.carpet.n, self.carpet.m
        ok = (p >= 0) & (p < self.nx) & (q >= 0) & (q < self.ny)
        p = np.where(ok, p, 0)
        q = np.where(ok, q, 0)
        ys = []
        for _ in range(self.k):
            ys.append(q % m)
            q = q // m
        ys.reverse()
        xs = []
        for _ in range(self.l):
            xs.append(p % n)
            p = p // n
        xs.reverse()
        for i in range(self.k):
            if i < self.l:
                ok &= self.table[xs[i], ys[i]]
            else:
                ok &= self.row_ok[ys[i]]
        return ok

    def offsets(self, delta: float) -> np.ndarray:
        """Index offsets ``(dp, dq) != 0`` whose cells lie within gap ``delta``."""
        wx = int(delta / self.w) + 1
        wy = int(delta / self.h) + 1
        if (2 * wx + 1) * (2 * wy + 1) > 200_000:
            raise BudgetExceeded("chain step too large for the cell level")
        dp, dq = np.meshgrid(np.arange(-wx, wx + 1), np.arange(-wy, wy + 1), indexing="ij")
        dp, dq = dp.ravel(), dq.ravel()
        gx = np.maximum(0, np.abs(dp) - 1) * self.w
        gy = np.maximum(0, np.abs(dq) - 1) * self.h
        keep = (np.hypot(gx, gy) <= delta) & ((dp != 0) | (dq != 0))
        return np.stack([dp[keep], dq[keep]], axis=1)

    def center(self, p, q):
        return (p + 0.5) * self.w, (q + 0.5) * self.h


def cell_gap(a, b) -> float:
    """Euclidean gap between closed rectangles ``(x0, y0, w, h)``; 0 if they touch."""
    gx = max(0.0, max(a[0], b[0]) - min(a[0] + a[2], b[0] + b[2]))
    gy = max(0.0, max(a[1], b[1]) - min(a[1] + a[3], b[1] + b[3]))
    return math.hypot(gx, gy)


def chain_level(carpet: BMCarpet, delta: float, k_min: int = 1) -> int:
    """Coarsest level ``k >= k_min`` whose cell diagonal is at most ``delta``."""
    k = k_min
    while True:
        l = level_split(k, carpet.n, carpet.m)
        if math.hypot(carpet.n**-l, carpet.m**-k) <= delta:
            return k
        k += 1
        if k > 200:
            raise BudgetExceeded(f"no level resolves chain step {delta}")


@dataclass
class ChainGraph:
    level: int
    delta: float
    cells: np.ndarray  # (V, 2) grid indices (p, q)
    edges: np.ndarray  # (E, 2) vertex indices, i < j
    nx: int
    ny: int

    @property
    def cell_width(self) -> float:
        return 1.0 / self.nx

    @property
    def cell_height(self) -> float:
        return 1.0 / self.ny

    def rect(self, i: int) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        """Exact ``(x0, y0, w, h)`` of vertex ``i``."""
        p, q = (int(v) for v in self.cells[i])
        return (Fraction(p, self.nx), Fraction(q, self.ny), Fraction(1, self.nx), Fraction(1, self.ny))

    def components(self) -> tuple[int, np.ndarray]:
        V = len(self.cells)
        if len(self.edges):
            data = np.ones(len(self.edges))
            adj = coo_matrix((data, (self.edges[:, 0], self.edges[:, 1])), shape=(V, V))
        else:
            adj = coo_matrix((V, V))
        return connected_components(adj, directed=False)


def build_chain_graph(carpet: BMCarpet, k: int, delta: float, budget: int = GRAPH_BUDGET) -> ChainGraph:
    """All level-``k`` squares meeting the carpet, with edges at gap ``<= delta``."""
    if approx_square_count(carpet, k) > budget:
        raise BudgetExceeded(f"level {k} has more than {budget} cells")
    grid = CellGrid(carpet, k)
    addrs = enumerate_addresses_fast(carpet, k)
    cells = np.array(sorted(addrs), dtype=np.int64).reshape(-1, 2)
    keys = cells[:, 0] * grid.ny + cells[:, 1]
    order = np.argsort(keys)
    keys_sorted = keys[order]
    edges = []
    for dp, dq in grid.offsets(delta):
        if (dp, dq) < (0, 0):
            continue
        nb = (cells[:, 0] + dp) * grid.ny + (cells[:, 1] + dq)
        valid = (cells[:, 0] + dp >= 0) & (cells[:, 0] + dp < grid.nx) & (cells[:, 1] + dq >= 0) & (cells[:, 1] + dq < grid.ny)
        pos = np.searchsorted(keys_sorted, nb)
        pos = np.minimum(pos, len(keys_sorted) - 1)
        hit = valid & (keys_sorted[pos] == nb)
        src = np.nonzero(hit)[0]
        dst = order[pos[hit]]
        edges.append(np.stack([np.minimum(src, dst), np.maximum(src, dst)], axis=1))
    edges = np.unique(np.concatenate(edges), axis=0) if edges else np.zeros((0, 2), dtype=np.int64)
    return ChainGraph(k, delta, cells, edges, grid.nx, grid.ny)


def enumerate_addresses_fast(carpet: BMCarpet, k: int) -> set[tuple[int, int]]:
    """Grid indices ``(p, q)`` of all level-``k`` squares meeting the carpet."""
    n, m = carpet.n, carpet.m
    l = level_split(k, n, m)
    rows = sorted({y for _, y in carpet.cells})
    states = {(0, 0)}
    for i in range(k):
        if i < l:
            states = {(p * n + x, q * m + y) for p, q in states for x, y in carpet.cells}
        else:
            states = {(p, q * m + y) for p, q in states for y in rows}
    return states


def _reaches_outside(grid: CellGrid, start: tuple[int, int], center, r: float, delta: float,
                     budget: int) -> bool:
    offsets = grid.offsets(delta)
    cx, cy = center
    visited = {start}
    frontier = np.array([start], dtype=np.int64)
    while len(frontier):
        cand = (frontier[:, None, :] + offsets[None, :, :]).reshape(-1, 2)
        cand = np.unique(cand, axis=0)
        cand = cand[grid.occupied(cand[:, 0], cand[:, 1])]
        fresh = [tuple(c) for c in cand.tolist() if tuple(c) not in visited]
        if not fresh:
            return False
        fresh_arr = np.array(fresh, dtype=np.int64)
        px, py = grid.center(fresh_arr[:, 0], fresh_arr[:, 1])
        if np.any(np.hypot(px - cx, py - cy) > r):
            return True
        visited.update(fresh)
        if len(visited) > budget:
            raise BudgetExceeded(f"chain search visited more than {budget} cells")
        frontier = fresh_arr
    return False


def escape_test(carpet: BMCarpet, start: tuple[int, int], r: float, delta: float, k: int,
                budget: int = GRAPH_BUDGET) -> bool:
    """Whether a ``delta``-chain of level-``k`` cells leaves ``B(center(start), r)``.

    ``start`` is a grid index ``(p, q)`` of an occupied level-``k`` square.
    A cell has left the ball when its centre lies farther than ``r``.
    """
    grid = CellGrid(carpet, k)
    p, q = start
    if not grid.occupied(np.array([p]), np.array([q]))[0]:
        raise ParameterOutOfRange(f"start cell {start} does not meet the carpet")
    cx, cy = grid.center(p, q)
    if r >= max(math.hypot(cx - a, cy - b) for a in (0, 1) for b in (0, 1)):
        return False
    return _reaches_outside(grid, (p, q), (cx, cy), r, delta, budget)


def _descend(carpet: BMCarpet, k_from: int, pq: tuple[int, int], k_to: int) -> tuple[int, int]:
    """Representative level-``k_to`` square inside a level-``k_from`` square."""
    n, m = carpet.n, carpet.m
    l0, l1 = level_split(k_from, n, m), level_split(k_to, n, m)
    p, q = pq
    ys = []
    for _ in range(k_from):
        ys.append(q % m)
        q //= m
    ys.reverse()
    ys += [carpet.cells[0][1]] * (k_to - k_from)
    q = 0
    for y in ys:
        q = q * m + y
    # newly fixed columns must sit in the row already chosen at that position
    for pos in range(l0, l1):
        p = p * n + carpet.row(ys[pos])[0]
    return p, q


def escape_delta(carpet: BMCarpet, start_level: int, start: tuple[int, int], r: float,
                 budget: int = GRAPH_BUDGET) -> Optional[float]:
    """Smallest ladder step ``r * 2^-j`` (``j <= 20``) whose chains escape ``B(z, r)``.

    Scans ``j = 0, 1, ...`` while chains escape; ``None`` if even ``delta = r``
    does not escape.
    """
    best = None
    for j in range(LADDER_STEPS + 1):
        delta = r * 2.0**-j
        k = chain_level(carpet, delta, start_level)
        cell = _descend(carpet, start_level, start, k)
        if escape_test(carpet, cell, r, delta, k, budget):
            best = delta
        else:
            break
    return best


@dataclass
class EscapeReport:
    rows: list[dict] = field(default_factory=list)
    rungs: list[dict] = field(default_factory=list)
    bound_constant: float = 0.0
    certified: bool = True

    def _ratios(self, k: Optional[int] = None) -> list[float]:
        return [r["ratio"] for r in self.rows
                if r["ratio"] is not None and (k is None or r["start_level"] == k)]

    @property
    def constant(self) -> Optional[float]:
        """Empirical constant: smallest ``r / delta*`` over sampled starts."""
        vals = self._ratios()
        return min(vals) if vals else None

    @property
    def constant_max(self) -> Optional[float]:
        vals = self._ratios()
        return max(vals) if vals else None

    def rung_constant(self, k: int) -> Optional[float]:
        vals = self._ratios(k)
        return min(vals) if vals else None

    def scale_stable(self, k_from: int = 4, factor: float = 4.0) -> bool:
        """Per-rung constants from ``k_from`` on stay within ``factor`` of the first."""
        consts = [self.rung_constant(r["k"]) for r in self.rungs if r["k"] >= k_from]
        consts = [c for c in consts if c is not None]
        if not consts:
            return False
        return min(consts) * factor >= consts[0]

    @property
    def no_escape_at_budget(self) -> int:
        return sum(1 for r in self.rows if r["delta_star"] is None)


@dataclass
class Classification:
    verdict: str
    report: Optional[EscapeReport] = None
    witness: dict = field(default_factory=dict)


def _start_squares(carpet: BMCarpet, k: int, rng: random.Random, samples: int) -> list[tuple[int, int]]:
    if k <= EXHAUSTIVE_LEVEL:
        return sorted(enumerate_addresses_fast(carpet, k))
    n, m = carpet.n, carpet.m
    l = level_split(k, n, m)
    rows = sorted({y for _, y in carpet.cells})
    out = set()
    while len(out) < samples:
        p = q = 0
        for i in range(k):
            if i < l:
                x, y = rng.choice(carpet.cells)
                p = p * n + x
            else:
                y = rng.choice(rows)
            q = q * m + y
        out.add((p, q))
    return sorted(out)


def classify_uniform_disconnection(
    carpet: BMCarpet,
    depth: int,
    k_min: int = 3,
    seed: int = 0,
    samples: int = START_SAMPLES,
    escape_samples: int = ESCAPE_SAMPLES,
    budget: int = GRAPH_BUDGET,
) -> Classification:
    """Classify a carpet by the chain argument or by the tangent witness.

    When ``s < m`` and ``t < n`` every start square on the ladder
    ``r = 2 n^2 m^-k`` (``k = k_min..depth``) is checked for escapes at step
    ``r / (4 m n^3)``, and minimal escape steps are measured for a seeded
    sample of starts. Otherwise the tangent's full digit axis is reported.
    """
    n, m = carpet.n, carpet.m
    if n <= m:
        raise ParameterOutOfRange("classification needs n > m")
    stats = bm_row_stats(carpet)
    if stats.s == m or stats.t == n:
        spec = tangent_digits(carpet)
        full = "both" if (stats.s == m and stats.t == n) else ("y" if stats.s == m else "x")
        return Classification(
            "MinimalWitness",
            witness={"full_axis": full, "cx_digits": spec.cx_digits, "cy_digits": spec.cy_digits},
        )

    C = 4 * m * n**3
    rng = random.Random(seed)
    report = EscapeReport(bound_constant=float(C))
    for k in range(k_min, depth + 1):
        r = 2 * n**2 * float(m) ** -k
        delta = r / C
        kg = chain_level(carpet, delta, k)
        grid = CellGrid(carpet, kg)
        starts = _start_squares(carpet, k, rng, samples)
        escapes = 0
        for pq in starts:
            cell = _descend(carpet, k, pq, kg)
            cx, cy = grid.center(*cell)
            if r >= max(math.hypot(cx - a, cy - b) for a in (0, 1) for b in (0, 1)):
                continue
            if _reaches_outside(grid, cell, (cx, cy), r, delta, budget):
                escapes += 1
        if escapes:
            report.certified = False
        sample = starts if len(starts) <= escape_samples else rng.sample(starts, escape_samples)
        ratios = []
        for pq in sorted(sample):
            d = escape_delta(carpet, k, pq, r, budget)
            ratio = r / d if d else None
            if ratio is not None:
                ratios.append(ratio)
            report.rows.append({"start_level": k, "start_p": pq[0], "start_q": pq[1], "r": r,
                                "delta_star": d, "ratio": ratio})
        report.rungs.append({"k": k, "r": r, "delta": delta, "graph_level": kg,
                             "starts": len(starts), "escapes": escapes,
                             "constant": min(ratios) if ratios else None})
    verdict = "UniformlyDisconnected" if report.certified else "EscapeObserved"
    return Classification(verdict, report)


def vertical_band_ok(carpet: BMCarpet, k: int, start: tuple[int, int], budget: int = GRAPH_BUDGET) -> bool:
    """Chains of step ``m^-(k+1) / 2`` from a level-``k`` square stay in a band of two rows.

    Returns True when the reachable component's rows fit in
    ``[Q/m^k, (Q+2)/m^k]`` for some ``Q``.
    """
    m = carpet.m
    delta = 0.5 * float(m) ** -(k + 1)
    kg = chain_level(carpet, delta, k + 1)
    grid = CellGrid(carpet, kg)
    cell = _descend(carpet, k, start, kg)
    offsets = grid.offsets(delta)
    visited = {cell}
    frontier = np.array([cell], dtype=np.int64)
    while len(frontier):
        cand = np.unique((frontier[:, None, :] + offsets[None, :, :]).reshape(-1, 2), axis=0)
        cand = cand[grid.occupied(cand[:, 0], cand[:, 1])]
        fresh = [tuple(c) for c in cand.tolist() if tuple(c) not in visited]
        if len(visited) + len(fresh) > budget:
            raise BudgetExceeded(f"component larger than {budget} cells")
        visited.update(fresh)
        frontier = np.array(fresh, dtype=np.int64).reshape(-1, 2)
    qs = [q for _, q in visited]
    scale = m ** (kg - k)
    band = min(qs) // scale
    return max(qs) + 1 <= (band + 2) * scale


LG_PAIR_BUDGET = 5_000


def lg_cell_rects(carpet: LGCarpet, depth: int, budget: int = LG_PAIR_BUDGET) -> np.ndarray:
    """Rectangles ``(x0, y0, w, h)`` of all depth-``depth`` cylinder images."""
    maps = [(float(a), float(b), float(c), float(d)) for _, _, a, c, b, d in carpet.maps()]
    if len(maps) ** depth > budget:
        raise BudgetExceeded(f"more than {budget} cells at depth {depth}")
    rects = np.array([[0.0, 0.0, 1.0, 1.0]])
    for _ in range(depth):
        out = []
        for a, b, c, d in maps:
            out.append(np.stack([rects[:, 0] * a + c, rects[:, 1] * b + d,
                                 rects[:, 2] * a, rects[:, 3] * b], axis=1))
        rects = np.concatenate(out)
    return rects


def lg_chain_components(carpet: LGCarpet, depth: int, delta: float,
                        budget: int = LG_PAIR_BUDGET) -> int:
    """Number of ``delta``-chain components among depth-``depth`` cells.

    Heuristic evidence only: LG cells need not shrink uniformly, so no
    lemma-level guarantee is attached.
    """
    R = lg_cell_rects(carpet, depth, budget)
    x0, y0, x1, y1 = R[:, 0], R[:, 1], R[:, 0] + R[:, 2], R[:, 1] + R[:, 3]
    gx = np.maximum(0.0, np.maximum(x0[:, None], x0[None, :]) - np.minimum(x1[:, None], x1[None, :]))
    gy = np.maximum(0.0, np.maximum(y0[:, None], y0[None, :]) - np.minimum(y1[:, None], y1[None, :]))
    adj = np.hypot(gx, gy) <= delta
    return int(connected_components(coo_matrix(adj), directed=False)[0])
