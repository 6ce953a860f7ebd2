"""Hafnian and permanent kernels against naive oracles."""

from __future__ import annotations

import math
import random

import pytest

import photongraph as pg
from photongraph import Edge, ExperimentGraph

from fixt import double_edge
from oracles import brute_force_covers, naive_permanent


def test_hafnian_single_pair():
    assert pg.hafnian([[0, 1], [1, 0]]) == 1


def test_hafnian_empty_matrix():
    assert pg.hafnian([]) == 1


def test_hafnian_k6_adjacency():
    assert pg.hafnian(pg.complete_graph(6).adjacency()) == 15


def test_hafnian_double_edge_multiplicity():
    assert pg.hafnian(double_edge().adjacency()) == 2


def test_hafnian_matches_enumeration_random_8():
    rng = random.Random(5)
    for _ in range(20):
        g = pg.random_graph(8, rng.uniform(0.2, 0.9), rng.getrandbits(32))
        assert pg.hafnian(g.adjacency()) == len(brute_force_covers(g))


def test_hafnian_rejects_odd_order():
    with pytest.raises(pg.DomainError):
        pg.hafnian([[0, 1, 0], [1, 0, 0], [0, 0, 0]])


def test_hafnian_rejects_asymmetry():
    with pytest.raises(pg.DomainError):
        pg.hafnian([[0, 1], [2, 0]])


def test_hafnian_rejects_nonzero_diagonal():
    with pytest.raises(pg.DomainError):
        pg.hafnian([[1, 1], [1, 0]])


def test_hafnian_scale_guard():
    n = 26
    m = [[0 if i == j else 1 for j in range(n)] for i in range(n)]
    with pytest.raises(pg.ScaleLimitError):
        pg.hafnian(m)


def test_hafnian_block_diagonal_product():
    rng = random.Random(9)
    for _ in range(10):
        a = _random_symmetric(rng, 4)
        b = _random_symmetric(rng, 6)
        block = [
            [a[i][j] if i < 4 and j < 4 else (b[i - 4][j - 4] if i >= 4 and j >= 4 else 0)
             for j in range(10)]
            for i in range(10)
        ]
        assert pg.hafnian(block) == pg.hafnian(a) * pg.hafnian(b)


def _random_symmetric(rng, n):
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = m[j][i] = rng.randrange(0, 4)
    return m


def test_hafnian_complex_entries():
    theta = 2.0
    m = [[0, complex(math.cos(theta), math.sin(theta))],
         [complex(math.cos(theta), math.sin(theta)), 0]]
    value = pg.hafnian(m)
    assert abs(value - complex(math.cos(theta), math.sin(theta))) < 1e-12


def test_permanent_identity():
    assert pg.permanent([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 1


def test_permanent_all_ones():
    assert pg.permanent([[1] * 4 for _ in range(4)]) == 24


def test_permanent_all_ones_factorial():
    for n in range(0, 11):
        m = [[1] * n for _ in range(n)]
        assert pg.permanent(m) == math.factorial(n)


def test_permanent_matches_naive():
    rng = random.Random(17)
    for n in range(1, 8):
        m = [[rng.randrange(-3, 4) for _ in range(n)] for _ in range(n)]
        assert pg.permanent(m) == naive_permanent(m)


def test_permanent_complex_matches_naive():
    rng = random.Random(23)
    m = [[complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(5)] for _ in range(5)]
    assert abs(pg.permanent(m) - naive_permanent(m)) < 1e-9


def test_permanent_rejects_non_square():
    with pytest.raises(pg.DomainError):
        pg.permanent([[1, 2, 3], [4, 5, 6]])


def test_permanent_scale_guard():
    m = [[1] * 21 for _ in range(21)]
    with pytest.raises(pg.ScaleLimitError):
        pg.permanent(m)


def test_permanent_counts_bipartite_matchings():
    rng = random.Random(31)
    for _ in range(20):
        k = rng.randrange(1, 6)
        g = _random_bipartite(rng, k)
        bi = g.biadjacency((g.vertices[:k], g.vertices[k:]))
        assert pg.permanent([list(r) for r in bi.entries]) == len(brute_force_covers(g))


def _random_bipartite(rng, k):
    xs = [f"x{i}" for i in range(k)]
    ys = [f"y{i}" for i in range(k)]
    edges = []
    for x in xs:
        for y in ys:
            if rng.random() < 0.6:
                edges.append(Edge(f"{x}{y}", x, y))
    return ExperimentGraph(xs + ys, edges)


def test_count_via_matrix_k4():
    assert pg.count_pm_via_matrix(pg.complete_graph(4)) == 3


def test_fifteen_crystal_bipartite_graph_has_eight_matchings():
    from fixt import bipartite_ten

    g = bipartite_ten()
    assert pg.count_pm_via_matrix(g) == 8
    assert len(pg.enumerate_pm(g)) == 8


def test_count_via_matrix_bipartite_agreement():
    rng = random.Random(41)
    g = _random_bipartite(rng, 5)
    assert pg.count_pm_via_matrix(g) == len(pg.enumerate_pm(g))


def test_count_via_matrix_edgeless():
    assert pg.count_pm_via_matrix(ExperimentGraph(pg.vertex_names(4))) == 0


def test_count_via_matrix_rejects_measured():
    g = ExperimentGraph(["a", "b"], [Edge("x", "a", "b")], measured=["a"])
    with pytest.raises(pg.DomainError):
        pg.count_pm_via_matrix(g)


def test_count_via_matrix_propagates_odd_order():
    with pytest.raises(pg.DomainError):
        pg.count_pm_via_matrix(ExperimentGraph(["a", "b", "c"], [Edge("x", "a", "b")]))
