"""Approximate squares and covering counts.

A level-``k`` approximate square of a Bedford-McMullen carpet is fixed by
``l = level_split(k)`` column digits and ``k`` row digits; it is the
rectangle ``[p/n^l, (p+1)/n^l] x [q/m^k, (q+1)/m^k]``. Counts are symbolic:
an approximate square "meets the carpet" when some infinite digit word
``(x_i, y_i) in A`` has the square's digits as prefixes.

Closed-form counts are products of per-position factors and use Python
integers throughout. Two independent enumerations back them up:
:func:`enumerate_addresses` walks digit words, :func:`row_scan_count` walks
every admissible row word.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import BudgetExceeded, OuterMissesCarpet, ParameterOutOfRange
from .model import BMCarpet, LGCarpet, bm_row_stats
from .moran import lg_beta_x, lg_beta_y

WORD_BUDGET = 2_000_000
ROW_SCAN_LIMIT = 10**6
LG_BUDGET = 10**6


def level_split(k: int, n: int, m: int) -> int:
    """The unique ``l`` with ``n**l <= m**k < n**(l+1)``, by integer comparison.

    >>> level_split(5, 4, 3)
    3
    """
    if k < 0:
        raise ParameterOutOfRange(f"level must be >= 0, got {k}")
    if n < m or m < 2:
        raise ParameterOutOfRange(f"need n >= m >= 2, got n={n}, m={m}")
    target = m**k
    l, power = 0, n
    while power <= target:
        l += 1
        power *= n
    return l


@dataclass(frozen=True)
class ApproxSquare:
    """Digit address of a level-``k`` approximate square.

    ``x_digits`` has ``l`` entries (base ``n``), ``y_digits`` has ``k``
    entries (base ``m``), most significant first.
    """

    k: int
    x_digits: tuple[int, ...]
    y_digits: tuple[int, ...]

    @property
    def l(self) -> int:
        return len(self.x_digits)

    @classmethod
    def root(cls) -> "ApproxSquare":
        return cls(0, (), ())


def _digits_value(digits: Sequence[int], base: int) -> int:
    v = 0
    for d in digits:
        v = v * base + d
    return v


def square_index(sq: ApproxSquare, n: int, m: int) -> tuple[int, int]:
    """Grid position ``(p, q)`` of the square."""
    return _digits_value(sq.x_digits, n), _digits_value(sq.y_digits, m)


def square_rect(sq: ApproxSquare, n: int, m: int) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """``(x0, y0, width, height)`` as exact fractions."""
    p, q = square_index(sq, n, m)
    w, h = Fraction(1, n**sq.l), Fraction(1, m**sq.k)
    return p * w, q * h, w, h


def make_square(carpet: BMCarpet, k: int, x_digits: Sequence[int], y_digits: Sequence[int]) -> ApproxSquare:
    l = level_split(k, carpet.n, carpet.m)
    if len(x_digits) != l or len(y_digits) != k:
        raise ParameterOutOfRange(f"level {k} square needs {l} column and {k} row digits")
    return ApproxSquare(k, tuple(x_digits), tuple(y_digits))


def _check_outer(carpet: BMCarpet, outer: ApproxSquare) -> None:
    l = level_split(outer.k, carpet.n, carpet.m)
    if outer.l != l or len(outer.y_digits) != outer.k:
        raise ParameterOutOfRange(f"square digits do not match level {outer.k}")
    stats = bm_row_stats(carpet)
    for i, y in enumerate(outer.y_digits):
        if i < l:
            if (outer.x_digits[i], y) not in carpet:
                raise OuterMissesCarpet(f"digit pair {(outer.x_digits[i], y)} at position {i + 1} not in A")
        elif not stats.t_j[y]:
            raise OuterMissesCarpet(f"row {y} at position {i + 1} is empty")


def position_factors(carpet: BMCarpet, outer: ApproxSquare, k: int) -> list[int]:
    """Number of digit choices at each position ``1..k`` inside ``outer``.

    Positions fixed by the outer square contribute 1; a fixed row with a free
    column contributes ``t_y``; a free pair contributes ``|A|``; a free row
    contributes ``s``.
    """
    if k < outer.k:
        raise ParameterOutOfRange(f"inner level {k} below outer level {outer.k}")
    _check_outer(carpet, outer)
    stats = bm_row_stats(carpet)
    l = level_split(k, carpet.n, carpet.m)
    kp, lp = outer.k, outer.l
    out = []
    for i in range(k):
        if i < lp:
            out.append(1)
        elif i < kp:
            out.append(stats.t_j[outer.y_digits[i]] if i < l else 1)
        else:
            out.append(stats.a_total if i < l else stats.s)
    return out


def covering_count(carpet: BMCarpet, outer: ApproxSquare, k: int) -> int:
    """Number of level-``k`` approximate squares meeting the carpet inside ``outer``."""
    return math.prod(position_factors(carpet, outer, k))


def approx_square_count(carpet: BMCarpet, k: int) -> int:
    """Level-``k`` approximate squares meeting the carpet: ``|A|^l s^(k-l)``."""
    return covering_count(carpet, ApproxSquare.root(), k)


# ---------------------------------------------------------------------------
# independent enumerations


def enumerate_addresses(
    carpet: BMCarpet, k: int, outer: Optional[ApproxSquare] = None, budget: int = WORD_BUDGET
) -> set[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Addresses of level-``k`` squares hit by digit words of length ``k``.

    Walks every word in ``A^k`` compatible with ``outer`` and records the
    ``(x_1..x_l, y_1..y_k)`` prefix it lands in.
    """
    outer = outer or ApproxSquare.root()
    l = level_split(k, carpet.n, carpet.m)
    cells = carpet.cells
    found: set = set()
    visited = 0

    def walk(i, xs, ys):
        nonlocal visited
        if i == k:
            visited += 1
            if visited > budget:
                raise BudgetExceeded(f"more than {budget} digit words")
            found.add((tuple(xs[:l]), tuple(ys)))
            return
        for x, y in cells:
            if i < outer.k and y != outer.y_digits[i]:
                continue
            if i < outer.l and x != outer.x_digits[i]:
                continue
            xs.append(x)
            ys.append(y)
            walk(i + 1, xs, ys)
            xs.pop()
            ys.pop()

    walk(0, [], [])
    return found


def row_scan_count(carpet: BMCarpet, k: int, outer: Optional[ApproxSquare] = None) -> int:
    """Covering count by scanning all row words ``y_1..y_k`` inside ``outer``.

    For each row word the admissible column words ``x_1..x_l`` are counted
    position by position from the digit set. Limited to ``m**(k - k') <= 10**6``.
    """
    outer = outer or ApproxSquare.root()
    n, m = carpet.n, carpet.m
    free = k - outer.k
    if m**free > ROW_SCAN_LIMIT:
        raise BudgetExceeded(f"{m}**{free} row words exceeds scan limit")
    l = level_split(k, n, m)
    # admissible[i][y] = number of x allowed at position i given row y
    admissible = np.zeros((k, m), dtype=np.int64)
    for i in range(k):
        for y in range(m):
            xs = [x for x in range(n) if (x, y) in carpet]
            if i < outer.l:
                xs = [x for x in xs if x == outer.x_digits[i]]
            if i < l:
                admissible[i, y] = len(xs)
            else:
                admissible[i, y] = 1 if xs else 0
    q = np.arange(m**free, dtype=np.int64)
    total = np.ones_like(q)
    for i in range(k - 1, -1, -1):
        if i < outer.k:
            y = np.full_like(q, outer.y_digits[i])
        else:
            y = q % m
            q = q // m
        total *= admissible[i, y]
    return int(total.sum())


# ---------------------------------------------------------------------------
# counting lemma


@dataclass
class CountReport:
    """Covering-count table over scale pairs.

    Each row of ``table`` holds ``k_outer, k, l_outer, l, max_count,
    total_count, bound, exponent``.
    """

    table: list[dict] = field(default_factory=list)
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _representative_outer(carpet: BMCarpet, kp: int, pattern: Sequence[int]) -> ApproxSquare:
    lp = level_split(kp, carpet.n, carpet.m)
    x0, y0 = carpet.cells[0]
    return ApproxSquare(kp, (x0,) * lp, (y0,) * lp + tuple(pattern))


def verify_counting_lemma(carpet: BMCarpet, K: int, pattern_budget: int = 200_000) -> CountReport:
    """Check ``N_k <= t^(l-l') s^(k-k')`` and its logarithmic form for all scale pairs.

    Outer squares are enumerated up to equivalence: the count inside an outer
    square depends only on its rows at positions ``l'+1..k'``.
    """
    n, m = carpet.n, carpet.m
    if n <= m:
        raise ParameterOutOfRange("counting lemma needs n > m")
    stats = bm_row_stats(carpet)
    s, t = stats.s, stats.t
    rows = [y for y in range(m) if stats.t_j[y]]
    log_m_t = math.log(t) / math.log(m)
    alpha = math.log(s) / math.log(m) + math.log(t) / math.log(n)
    report = CountReport()
    for kp in range(1, K + 1):
        lp = level_split(kp, n, m)
        free = kp - lp
        if len(rows) ** free > pattern_budget:
            raise BudgetExceeded(f"{len(rows)}**{free} outer patterns at level {kp}")
        patterns = list(itertools.product(rows, repeat=free))
        for k in range(kp, K + 1):
            l = level_split(k, n, m)
            bound = t ** (l - lp) * s ** (k - kp)
            counts = []
            for pat in patterns:
                outer = _representative_outer(carpet, kp, pat)
                N = covering_count(carpet, outer, k)
                counts.append(N)
                if N > bound:
                    report.violations.append(
                        {"kind": "sharp", "k_outer": kp, "k": k, "rows": pat, "count": N, "bound": bound}
                    )
                if math.log(N) / math.log(m) > (k - kp) * alpha + log_m_t + 1e-9:
                    report.violations.append(
                        {"kind": "log", "k_outer": kp, "k": k, "rows": pat, "count": N}
                    )
            total = stats.a_total**lp * sum(counts)
            if total != approx_square_count(carpet, k):
                report.violations.append({"kind": "total", "k_outer": kp, "k": k, "count": total})
            mx = max(counts)
            report.table.append(
                {
                    "k_outer": kp,
                    "k": k,
                    "l_outer": lp,
                    "l": l,
                    "max_count": mx,
                    "total_count": total,
                    "bound": bound,
                    "exponent": math.log(mx) / math.log(m) / (k - kp) if k > kp else float("nan"),
                }
            )
    return report


# ---------------------------------------------------------------------------
# estimators


def minkowski_estimate(carpet: BMCarpet, k_min: int, k_max: int) -> float:
    """Least-squares slope of ``log N(k)`` against ``k log m``."""
    if k_min >= k_max:
        raise ParameterOutOfRange("need k_min < k_max")
    ks = np.arange(k_min, k_max + 1)
    logs = [math.log(approx_square_count(carpet, int(k))) for k in ks]
    return float(np.polyfit(ks * math.log(carpet.m), logs, 1)[0])


def extremal_outer(carpet: BMCarpet, k_outer: int) -> ApproxSquare:
    """Outer square whose digits all sit in the fullest row (smallest index)."""
    stats = bm_row_stats(carpet)
    y_star = stats.t_j.index(stats.t)
    x_star = carpet.row(y_star)[0]
    lp = level_split(k_outer, carpet.n, carpet.m)
    return ApproxSquare(k_outer, (x_star,) * lp, (y_star,) * k_outer)


def max_covering_count(carpet: BMCarpet, k_outer: int, k: int) -> int:
    """Exhaustive maximum of the covering count over outer squares (small depth)."""
    stats = bm_row_stats(carpet)
    rows = [y for y in range(carpet.m) if stats.t_j[y]]
    lp = level_split(k_outer, carpet.n, carpet.m)
    return max(
        covering_count(carpet, _representative_outer(carpet, k_outer, pat), k)
        for pat in itertools.product(rows, repeat=k_outer - lp)
    )


def assouad_table(carpet: BMCarpet, pairs: Iterable[tuple[int, int]]) -> list[dict]:
    """Two-scale exponents ``log_m(N) / (k - k')`` at the extremal outer square."""
    if carpet.n <= carpet.m:
        raise ParameterOutOfRange("two-scale estimator needs n > m")
    out = []
    for kp, k in pairs:
        if k <= kp:
            raise ParameterOutOfRange(f"pair ({kp}, {k}) needs k > k'")
        N = covering_count(carpet, extremal_outer(carpet, kp), k)
        out.append(
            {
                "k_outer": kp,
                "k": k,
                "l_outer": level_split(kp, carpet.n, carpet.m),
                "l": level_split(k, carpet.n, carpet.m),
                "count": N,
                "exponent": math.log(N) / math.log(carpet.m) / (k - kp),
            }
        )
    return out


def assouad_estimate(carpet: BMCarpet, gaps: Iterable[tuple[int, int]]) -> float:
    """Maximum two-scale exponent over the given ``(k', k)`` pairs."""
    return max(row["exponent"] for row in assouad_table(carpet, gaps))


def gap_pairs(carpet: BMCarpet, gaps: Iterable[int], window: int = 64) -> list[tuple[int, int]]:
    """One ``(k', k' + g)`` pair per gap ``g``.

    ``k'`` is taken from the first ``window`` levels at which the inner
    square sits within the outer row band (``l <= k'``), choosing the level
    whose outer approximate square is closest to a true square.
    """
    n, m = carpet.n, carpet.m
    if n <= m:
        raise ParameterOutOfRange("two-scale estimator needs n > m")
    pairs = []
    for g in gaps:
        start = 1
        while level_split(start + g, n, m) > start:
            start += 1
        best = min(
            range(start, start + window),
            key=lambda kp: (Fraction(m**kp, n ** level_split(kp, n, m)), kp),
        )
        pairs.append((best, best + g))
    return pairs


# ---------------------------------------------------------------------------
# Lalley-Gatzouras


def _product(values, one):
    out = one
    for v in values:
        out *= v
    return out


def lg_split(carpet: LGCarpet, word: Sequence[tuple[int, int]]) -> int:
    """Largest ``l`` with ``prod_{v<=k} b_{i_v} <= prod_{v<=l} a_{i_v j_v}``.

    ``word`` is a sequence of 0-based ``(i, j)`` of length ``k``.
    """
    one = Fraction(1) if carpet.exact else 1.0
    rows = carpet.rows
    R = _product((rows[i].b for i, _ in word), one)
    prod_a, l = one, 0
    for i, j in word:
        prod_a *= rows[i].cols[j].a
        if prod_a < R:
            break
        l += 1
    return l


@dataclass(frozen=True)
class LGSquareCount:
    size: int
    ratio: float
    R: float
    epsilon: float
    exponent: float
    k_outer: int
    l_outer: int


def lg_approx_squares(
    carpet: LGCarpet,
    outer_word: Sequence[tuple[int, int]],
    epsilon,
    budget: int = LG_BUDGET,
) -> LGSquareCount:
    """Enumerate the ``epsilon``-level codings that extend an approximate square.

    Counts tuples ``(i_1..i_{k+1}; j_1..j_{l+1})`` whose height products
    cross ``epsilon`` at ``k+1`` and width products at ``l+1``, with
    ``i_v`` fixed by the outer word for ``v <= k'`` and ``j_v`` for
    ``v <= l'``. The ratio returned is ``size / (R/epsilon)^(beta_x+beta_y)``.
    """
    exact = carpet.exact and isinstance(epsilon, (int, Fraction))
    one = Fraction(1) if exact else 1.0
    if not exact:
        epsilon = float(epsilon)
    rows = carpet.rows
    if not exact:
        bs = [float(r.b) for r in rows]
        As = [[float(c.a) for c in r.cols] for r in rows]
    else:
        bs = [r.b for r in rows]
        As = [[c.a for c in r.cols] for r in rows]

    outer_word = [tuple(w) for w in outer_word]
    kp = len(outer_word)
    for i, j in outer_word:
        if not (0 <= i < len(rows) and 0 <= j < len(rows[i].cols)):
            raise ParameterOutOfRange(f"outer word letter {(i, j)} not in the index set")
    R = _product((bs[i] for i, _ in outer_word), one)
    lp = lg_split(carpet, outer_word)
    if not 0 < epsilon < R:
        raise ParameterOutOfRange(f"epsilon {epsilon} not in (0, {R})")

    size = 0
    m = len(rows)

    def walk(v, pb, pa):
        # v: 0-based position; pb, pa: products over positions < v
        nonlocal size
        choices_i = [outer_word[v][0]] if v < kp else range(m)
        for i in choices_i:
            nb = pb * bs[i]
            if pa >= epsilon:
                choices_j = [outer_word[v][1]] if v < lp else range(len(As[i]))
                for j in choices_j:
                    na = pa * As[i][j]
                    if nb < epsilon:
                        size += 1
                        if size > budget:
                            raise BudgetExceeded(f"more than {budget} codings")
                    else:
                        walk(v + 1, nb, na)
            elif nb < epsilon:
                size += 1
                if size > budget:
                    raise BudgetExceeded(f"more than {budget} codings")
            else:
                walk(v + 1, nb, pa)

    walk(0, one, one)
    exponent = lg_beta_x(carpet)[1] + lg_beta_y(carpet)
    ratio = size / (float(R) / float(epsilon)) ** exponent
    return LGSquareCount(size, ratio, float(R), float(epsilon), exponent, kp, lp)
