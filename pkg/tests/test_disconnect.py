import math
import random

import numpy as np
import pytest

from carpetdim.counting import approx_square_count, level_split
from carpetdim.disconnect import (
    CellGrid,
    build_chain_graph,
    cell_gap,
    chain_level,
    classify_uniform_disconnection,
    enumerate_addresses_fast,
    escape_delta,
    escape_test,
    lg_cell_rects,
    lg_chain_components,
    vertical_band_ok,
)
from carpetdim.errors import BudgetExceeded, ParameterOutOfRange
from carpetdim.model import embed_bm_as_lg, validate_bm

from conftest import full_grid


def _brute_edges(g):
    V = len(g.cells)
    return {(i, j) for i in range(V) for j in range(i + 1, V) if cell_gap(g.rect(i), g.rect(j)) <= g.delta}


def test_cell_gap():
    assert cell_gap((0, 0, 1, 1), (1, 0, 1, 1)) == 0.0
    assert cell_gap((0, 0, 1, 1), (2, 0, 1, 1)) == 1.0
    assert cell_gap((0, 0, 1, 1), (4, 5, 1, 1)) == 5.0
    assert cell_gap((0, 0, 1, 1), (0, 0, 1, 1)) == 0.0


def test_addresses_match_count(S1, S2):
    for c in (S1, S2):
        for k in range(6):
            assert len(enumerate_addresses_fast(c, k)) == approx_square_count(c, k)


def test_occupancy_oracle(S1):
    grid = CellGrid(S1, 4)
    addrs = enumerate_addresses_fast(S1, 4)
    P, Q = np.meshgrid(np.arange(grid.nx), np.arange(grid.ny), indexing="ij")
    occ = grid.occupied(P.ravel(), Q.ravel())
    got = {(int(p), int(q)) for p, q, o in zip(P.ravel(), Q.ravel(), occ) if o}
    assert got == addrs
    assert not grid.occupied(np.array([-1, grid.nx]), np.array([0, 0])).any()


def test_single_cell_graph():
    g = build_chain_graph(validate_bm(4, 3, [(1, 1)]), 3, 0.1)
    assert len(g.cells) == 1 and len(g.edges) == 0


def test_full_grid_touching_component():
    g = build_chain_graph(full_grid(), 3, 0.0)
    assert len(g.cells) == 3**3 * 4**2
    assert g.components()[0] == 1
    assert set(map(tuple, g.edges.tolist())) == _brute_edges(g)


def test_s1_graph_vs_brute_force(S1):
    g = build_chain_graph(S1, 4, 0.5 * 4**-4)
    assert set(map(tuple, g.edges.tolist())) == _brute_edges(g)
    ncomp, labels = g.components()
    assert 1 < ncomp <= len(g.cells)


@pytest.mark.parametrize("delta", [0.0, 0.01, 0.05])
def test_graph_symmetry_and_triangle(S2, delta):
    g = build_chain_graph(S2, 3, delta)
    rng = random.Random(1)
    V = len(g.cells)
    diam = math.hypot(g.cell_width, g.cell_height)
    for _ in range(300):
        a, b, c = (rng.randrange(V) for _ in range(3))
        ra, rb, rc = g.rect(a), g.rect(b), g.rect(c)
        assert cell_gap(ra, rb) == cell_gap(rb, ra)
        assert cell_gap(ra, rc) <= cell_gap(ra, rb) + diam + cell_gap(rb, rc) + 1e-15
    assert (g.edges[:, 0] < g.edges[:, 1]).all()


def test_graph_budget(S1):
    with pytest.raises(BudgetExceeded):
        build_chain_graph(S1, 10, 0.0, budget=1000)


def test_escape_examples(S1):
    full = full_grid()
    assert escape_test(full, (3, 5), 0.3, 0.0, 3)
    assert escape_test(full, (0, 0), 0.49, 0.0, 2)
    # nothing of the carpet lies outside a ball wider than the unit square
    assert not escape_test(S1, (3, 6), 1.5, 1.0, 2)
    with pytest.raises(ParameterOutOfRange):
        escape_test(S1, (0, 0), 0.1, 0.01, 2)


def test_no_escape_at_bound_step(S1):
    n, m = S1.n, S1.m
    C = 4 * m * n**3
    for k in (3, 4, 5):
        r = 2 * n**2 * float(m) ** -k
        kg = chain_level(S1, r / C, k)
        for p, q in sorted(enumerate_addresses_fast(S1, kg))[::97]:
            assert not escape_test(S1, (p, q), r, r / C, kg)


def test_escape_delta_ladder(S1):
    r = 2 * 16 * 3.0**-4
    start = sorted(enumerate_addresses_fast(S1, 4))[17]
    d = escape_delta(S1, 4, start, r)
    assert d is not None and r / d >= 1
    # the reported step lies on the geometric ladder
    assert d in [r * 2.0**-j for j in range(21)]


def test_chain_level(S1):
    for delta in (0.1, 0.01, 0.001):
        k = chain_level(S1, delta)
        l = level_split(k, 4, 3)
        assert math.hypot(4.0**-l, 3.0**-k) <= delta
        lp = level_split(k - 1, 4, 3)
        assert k == 1 or math.hypot(4.0**-lp, 3.0 ** -(k - 1)) > delta


def test_vertical_confinement(S1):
    for k in (1, 2, 3):
        for start in sorted(enumerate_addresses_fast(S1, k)):
            assert vertical_band_ok(S1, k, start)


def test_classify_s1():
    from conftest import make_s1

    res = classify_uniform_disconnection(make_s1(), 5)
    assert res.verdict == "UniformlyDisconnected"
    rep = res.report
    assert rep.certified
    assert rep.bound_constant == 768
    assert 1 <= rep.constant <= 768
    assert rep.constant_max <= 768
    assert rep.scale_stable(4)
    assert [r["k"] for r in rep.rungs] == [3, 4, 5]
    assert all(r["escapes"] == 0 for r in rep.rungs)


def test_classify_witnesses(S2):
    res = classify_uniform_disconnection(S2, 5)
    assert res.verdict == "MinimalWitness"
    assert res.witness["full_axis"] == "y"
    assert res.witness["cy_digits"] == (0, 1, 2)
    full = classify_uniform_disconnection(full_grid(), 5)
    assert full.verdict == "MinimalWitness" and full.witness["full_axis"] == "both"
    t_full = classify_uniform_disconnection(validate_bm(4, 3, [(x, 0) for x in range(4)]), 5)
    assert t_full.witness["full_axis"] == "x"
    assert t_full.witness["cx_digits"] == (0, 1, 2, 3)
    with pytest.raises(ParameterOutOfRange):
        classify_uniform_disconnection(validate_bm(3, 3, [(0, 0)]), 4)


def test_classify_deterministic(S1):
    a = classify_uniform_disconnection(S1, 3, seed=3)
    b = classify_uniform_disconnection(S1, 3, seed=3)
    assert a.report.rows == b.report.rows


def test_lg_heuristic(S1, LG1):
    rects = lg_cell_rects(embed_bm_as_lg(S1), 2)
    assert len(rects) == 25
    assert np.allclose(rects[:, 2], 1 / 16) and np.allclose(rects[:, 3], 1 / 9)
    counts = [lg_chain_components(LG1, d, 0.0) for d in (1, 2, 3)]
    assert counts == sorted(counts) and counts[0] >= 1
    with pytest.raises(BudgetExceeded):
        lg_cell_rects(LG1, 12)
