"""Exact dimensions and the conformal Assouad dichotomy."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import SelfSimilarUnsupported
from .model import BMCarpet, LGCarpet, bm_row_stats, bm_touching, lg_touching
from .moran import ONE_TOL, lg_beta_x, lg_beta_y, lg_minkowski_delta

UNIFORM_FIBERS = "UniformFibers"
SELF_SIMILAR = "SelfSimilar"
DEGENERATE_FIBER = "DegenerateFiber"
TOUCHING_CELLS = "TouchingCells"


@dataclass(frozen=True)
class Conformal:
    """Conformal Assouad verdict: ``zero`` or ``minimal`` (value = Assouad)."""

    kind: str
    value: float

    @classmethod
    def zero(cls) -> "Conformal":
        return cls("zero", 0.0)

    @classmethod
    def minimal(cls, value: float) -> "Conformal":
        return cls("minimal", value)

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero"

    def __str__(self):
        return "zero" if self.is_zero else f"minimal({self.value:.12g})"


def _log(x, base):
    return math.log(x) / math.log(base)


def bm_hausdorff(carpet: BMCarpet) -> float:
    stats = bm_row_stats(carpet)
    theta = _log(carpet.m, carpet.n)
    return _log(math.fsum(tj**theta for tj in stats.t_j if tj), carpet.m)


def bm_minkowski(carpet: BMCarpet) -> float:
    stats = bm_row_stats(carpet)
    return _log(stats.s, carpet.m) + _log(stats.a_total / stats.s, carpet.n)


def bm_assouad(carpet: BMCarpet) -> float:
    stats = bm_row_stats(carpet)
    if carpet.n == carpet.m:
        return _log(stats.a_total, carpet.n)
    return _log(stats.s, carpet.m) + _log(stats.t, carpet.n)


def bm_conformal_assouad(carpet: BMCarpet) -> Conformal:
    if carpet.n == carpet.m:
        raise SelfSimilarUnsupported("conformal Assouad dimension of self-similar carpets is not classified")
    stats = bm_row_stats(carpet)
    if stats.t < carpet.n and stats.s < carpet.m:
        return Conformal.zero()
    return Conformal.minimal(bm_assouad(carpet))


def lg_assouad(carpet: LGCarpet) -> float:
    return lg_beta_x(carpet)[1] + lg_beta_y(carpet)


def lg_conformal_assouad(carpet: LGCarpet) -> Conformal:
    bx, by = lg_beta_x(carpet)[1], lg_beta_y(carpet)
    if bx < 1 - ONE_TOL and by < 1 - ONE_TOL:
        return Conformal.zero()
    return Conformal.minimal(bx + by)


@dataclass(frozen=True)
class DimensionReport:
    family: str
    minkowski: float
    assouad: float
    conformal_assouad: Optional[Conformal]
    hausdorff: Optional[float] = None
    flags: tuple[str, ...] = ()
    details: dict = field(default_factory=dict)

    def rows(self) -> list[tuple[str, str]]:
        """(quantity, value) pairs, numbers at 12 significant digits."""
        def fmt(v):
            if v is None:
                return "absent"
            if isinstance(v, float):
                return f"{v:.12g}"
            return str(v)

        out = [("family", self.family), ("hausdorff", fmt(self.hausdorff))]
        out += [("minkowski", fmt(self.minkowski)), ("assouad", fmt(self.assouad))]
        out.append(("conformal_assouad", "unsupported" if self.conformal_assouad is None
                    else str(self.conformal_assouad)))
        for key, val in self.details.items():
            out.append((key, fmt(val)))
        out.append(("flags", " ".join(self.flags) if self.flags else "none"))
        return out


def dimension_report(carpet: Union[BMCarpet, LGCarpet]) -> DimensionReport:
    if isinstance(carpet, BMCarpet):
        stats = bm_row_stats(carpet)
        flags = []
        if stats.uniform_fibers:
            flags.append(UNIFORM_FIBERS)
        if carpet.self_similar:
            flags.append(SELF_SIMILAR)
        if bm_touching(carpet):
            flags.append(TOUCHING_CELLS)
        conformal = None if carpet.self_similar else bm_conformal_assouad(carpet)
        return DimensionReport(
            family="bedford-mcmullen",
            hausdorff=bm_hausdorff(carpet),
            minkowski=bm_minkowski(carpet),
            assouad=bm_assouad(carpet),
            conformal_assouad=conformal,
            flags=tuple(flags),
            details={"n": carpet.n, "m": carpet.m, "s": stats.s, "t": stats.t,
                     "cells": stats.a_total},
        )
    by = lg_beta_y(carpet)
    i_star, bx = lg_beta_x(carpet)
    flags = []
    if bx == 0.0 or by == 0.0:
        flags.append(DEGENERATE_FIBER)
    if lg_touching(carpet):
        flags.append(TOUCHING_CELLS)
    return DimensionReport(
        family="lalley-gatzouras",
        minkowski=lg_minkowski_delta(carpet, by),
        assouad=bx + by,
        conformal_assouad=lg_conformal_assouad(carpet),
        flags=tuple(flags),
        details={"beta_x": bx, "beta_y": by, "i_star": i_star},
    )
