"""Monotone root finding for Moran-type equations.

Every equation here has the form ``sum(c_i * r_i**x) = target`` with all
``r_i`` in (0, 1), so the left side is strictly decreasing in ``x``. Roots are
bracketed by doubling, bisected, then polished with a few Newton steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import NoRoot, ParameterOutOfRange
from .model import LGCarpet

RESIDUAL_TOL = 1e-13
CROSS_TOL = 1e-10
ONE_TOL = 1e-12

_BISECT_STEPS = 200
_WIDTH_TOL = 1e-15
_NEWTON_STEPS = 3


@dataclass(frozen=True)
class MoranProblem:
    ratios: tuple[float, ...]
    target: float = 1.0

    def __post_init__(self):
        if not self.ratios:
            raise ParameterOutOfRange("Moran problem needs at least one ratio")
        for r in self.ratios:
            if not 0 < r < 1:
                raise ParameterOutOfRange(f"ratio {r} not in (0, 1)")


def _solve_decreasing(coefs: Sequence[float], ratios: Sequence[float], target: float) -> float:
    """Smallest ``x >= 0`` with ``sum(c * r**x) == target``."""
    logs = [math.log(r) for r in ratios]

    def f(x):
        return math.fsum(c * math.exp(x * lr) for c, lr in zip(coefs, logs)) - target

    def df(x):
        return math.fsum(c * lr * math.exp(x * lr) for c, lr in zip(coefs, logs))

    f0 = f(0.0)
    if f0 == 0.0:
        return 0.0
    if f0 < 0 or target <= 0:
        raise NoRoot(f"no root x >= 0: value at 0 is {f0 + target}, target {target}")

    lo, hi = 0.0, 1.0
    while f(hi) > 0:
        lo, hi = hi, 2.0 * hi
        if hi > 1e6:
            raise NoRoot("bracket did not close")
    for _ in range(_BISECT_STEPS):
        if hi - lo < _WIDTH_TOL:
            break
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(_NEWTON_STEPS):
        fx = f(x)
        if fx == 0.0:
            break
        step = fx / df(x)
        nx = x - step
        if not lo <= nx <= hi or abs(f(nx)) >= abs(fx):
            break
        x = nx
    return x


def moran_root(problem: MoranProblem | Sequence[float], target: float | None = None) -> float:
    """Root ``beta >= 0`` of ``sum(r**beta) = target``.

    >>> round(moran_root([0.25, 0.25]), 12)
    0.5
    """
    if not isinstance(problem, MoranProblem):
        problem = MoranProblem(tuple(float(r) for r in problem), 1.0 if target is None else target)
    if problem.target > len(problem.ratios):
        raise NoRoot(f"target {problem.target} exceeds ratio count {len(problem.ratios)}")
    return _solve_decreasing([1.0] * len(problem.ratios), problem.ratios, problem.target)


def _sum_is_one(values) -> bool:
    total = sum(values)
    if isinstance(total, (int, Fraction)):
        return total == 1
    return abs(total - 1) <= ONE_TOL


def _root_of(values) -> float:
    # exact unit mass pins the root at 1 so dichotomy branches cannot flip
    if _sum_is_one(values):
        return 1.0
    return moran_root([float(v) for v in values])


def lg_beta_y(carpet: LGCarpet) -> float:
    """Similarity dimension of the projection onto the vertical axis."""
    return _root_of(carpet.heights)


def lg_row_roots(carpet: LGCarpet) -> list[float]:
    """Per-row Moran roots of the column widths."""
    return [_root_of([col.a for col in row.cols]) for row in carpet.rows]


def lg_beta_x(carpet: LGCarpet) -> tuple[int, float]:
    """Maximal fibre dimension and the (1-based) row attaining it.

    Ties go to the smallest row index.
    """
    roots = lg_row_roots(carpet)
    best = max(roots)
    i_star = next(i for i, r in enumerate(roots) if r >= best - ONE_TOL)
    return i_star + 1, roots[i_star]


def lg_minkowski_delta(carpet: LGCarpet, beta_y: float | None = None) -> float:
    """Box-counting exponent ``delta`` of a Lalley-Gatzouras carpet.

    Solves ``sum_ij b_i**beta_y * a_ij**(delta - beta_y) = 1``; writing
    ``delta = beta_y + x`` turns it into a weighted Moran equation in ``x``.
    """
    if beta_y is None:
        beta_y = lg_beta_y(carpet)
    coefs, ratios = [], []
    for row in carpet.rows:
        w = float(row.b) ** beta_y
        for col in row.cols:
            coefs.append(w)
            ratios.append(float(col.a))
    if all(len(row.cols) == 1 for row in carpet.rows):
        # g(beta_y) = sum b_i**beta_y = 1 exactly
        return beta_y
    return beta_y + _solve_decreasing(coefs, ratios, 1.0)


def residual(ratios: Sequence[float], beta: float, target: float = 1.0) -> float:
    return math.fsum(r**beta for r in ratios) - target
