"""Binary graymap (P5) rendering of carpets and zoomed regions.

A pixel is dark when the level-``k`` cell containing its centre meets the
carpet. For Bedford-McMullen carpets pixel centres are located exactly with
rationals, so output is byte-identical across platforms. Lalley-Gatzouras
carpets are rendered from float rectangles.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .counting import level_split
from .disconnect import CellGrid, lg_cell_rects
from .errors import BudgetExceeded, ParameterOutOfRange, RegionEmpty
from .model import BMCarpet, LGCarpet, as_number

MIN_PIXELS = 16
MAX_PIXELS = 8192
LG_RECT_BUDGET = 200_000

Region = tuple[Fraction, Fraction, Fraction, Fraction]
FULL_REGION: Region = (Fraction(0), Fraction(0), Fraction(1), Fraction(1))


@dataclass(frozen=True)
class RenderConfig:
    """Render settings. The region ``(x0, y0, x1, y1)`` lies within the unit square."""

    level: int
    width: int
    height: int
    region: Region = FULL_REGION

    def __post_init__(self):
        if self.level < 0:
            raise ParameterOutOfRange(f"level {self.level} must be >= 0")
        for name, v in (("width", self.width), ("height", self.height)):
            if not MIN_PIXELS <= v <= MAX_PIXELS:
                raise ParameterOutOfRange(f"{name} {v} outside [{MIN_PIXELS}, {MAX_PIXELS}] pixels")
        region = tuple(as_number(v) for v in self.region)
        object.__setattr__(self, "region", region)
        x0, y0, x1, y1 = region
        if not (x0 < x1 and y0 < y1):
            raise RegionEmpty(f"region {tuple(map(str, region))} has no area")
        if min(region) < 0 or max(region) > 1:
            raise ParameterOutOfRange(f"region {tuple(map(str, region))} leaves the unit square")


def parse_region(text: str) -> Region:
    """``"x0,y0,x1,y1"`` with decimal or ``p/q`` entries."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4:
        raise ParameterOutOfRange(f"region {text!r} needs four comma-separated numbers")
    try:
        return tuple(Fraction(p) for p in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParameterOutOfRange(f"region {text!r}: {exc}") from None


def _centres(lo: Fraction, hi: Fraction, count: int) -> list[Fraction]:
    step = (Fraction(hi) - Fraction(lo)) / count
    return [lo + (i + Fraction(1, 2)) * step for i in range(count)]


def _bm_mask(carpet: BMCarpet, cfg: RenderConfig) -> np.ndarray:
    grid = CellGrid(carpet, cfg.level)
    x0, y0, x1, y1 = cfg.region
    # cells are half-open except at the right/top edge of the unit square
    ps = np.array([min(int(c * grid.nx), grid.nx - 1) for c in _centres(x0, x1, cfg.width)], dtype=np.int64)
    qs = np.array([min(int(c * grid.ny), grid.ny - 1) for c in _centres(y0, y1, cfg.height)], dtype=np.int64)
    qs = qs[::-1]  # image rows run top to bottom
    return grid.occupied(ps[None, :], qs[:, None])


def _lg_mask(carpet: LGCarpet, cfg: RenderConfig) -> np.ndarray:
    rects = lg_cell_rects(carpet, cfg.level, LG_RECT_BUDGET)
    x0, y0, x1, y1 = (float(v) for v in cfg.region)
    xs = x0 + (np.arange(cfg.width) + 0.5) * (x1 - x0) / cfg.width
    ys = y1 - (np.arange(cfg.height) + 0.5) * (y1 - y0) / cfg.height
    mask = np.zeros((cfg.height, cfg.width), dtype=bool)
    for rx, ry, rw, rh in rects:
        cols = np.nonzero((xs >= rx) & (xs <= rx + rw))[0]
        if not len(cols):
            continue
        rows = np.nonzero((ys >= ry) & (ys <= ry + rh))[0]
        if len(rows):
            mask[rows[0]:rows[-1] + 1, cols[0]:cols[-1] + 1] = True
    return mask


def render_mask(carpet: Union[BMCarpet, LGCarpet], cfg: RenderConfig) -> np.ndarray:
    """Boolean image, ``True`` = dark, row 0 at the top of the region."""
    if isinstance(carpet, BMCarpet):
        l = level_split(cfg.level, carpet.n, carpet.m)
        if l * np.log2(carpet.n) + cfg.level * np.log2(carpet.m) > 62:
            raise BudgetExceeded(f"level {cfg.level} grid too large")
        return _bm_mask(carpet, cfg)
    return _lg_mask(carpet, cfg)


def to_pgm(mask: np.ndarray) -> bytes:
    h, w = mask.shape
    pixels = np.where(mask, 0, 255).astype(np.uint8)
    return f"P5\n{w} {h}\n255\n".encode("ascii") + pixels.tobytes()


def render(carpet: Union[BMCarpet, LGCarpet], cfg: RenderConfig) -> bytes:
    """P5 graymap bytes: dark (0) where the carpet is present, white (255) elsewhere."""
    return to_pgm(render_mask(carpet, cfg))


def read_pgm(data: bytes) -> np.ndarray:
    """Inverse of :func:`to_pgm` for the exact header it writes."""
    magic, dims, maxval, body = data.split(b"\n", 3)
    if magic != b"P5" or maxval != b"255":
        raise ParameterOutOfRange("not an 8-bit P5 graymap")
    w, h = map(int, dims.split())
    return np.frombuffer(body, dtype=np.uint8).reshape(h, w) == 0

