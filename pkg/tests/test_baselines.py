import math

import numpy as np
import pytest

import hoplink as hl
from hoplink import BaselineMethod as M
from helpers import ix, mk_graph, mk_unweighted, random_unweighted
from oracles import brute_l3, brute_two_hop_index, undirected_adjacency


def square():
    return mk_unweighted([(1, 2), (1, 3), (4, 2), (4, 3)])


def test_two_hop_fixture_values():
    g = square()
    i, j = ix(g, 1, 4)
    assert hl.two_hop_index(g, M.CN, i, j) == 2
    assert hl.two_hop_index(g, M.JACCARD, i, j) == 1.0
    assert hl.two_hop_index(g, M.PA, i, j) == 4
    assert hl.two_hop_index(g, M.RA, i, j) == 1.0
    assert hl.two_hop_index(g, M.AA, i, j) == pytest.approx(2 / math.log(2), rel=1e-12)
    assert hl.two_hop_index(g, M.AA, i, j) == pytest.approx(2.885, abs=5e-4)
    assert hl.two_hop_index(g, M.LHN, i, j) == 0.5
    assert hl.two_hop_index(g, M.HP, i, j) == 1.0


def test_two_hop_matches_brute_force():
    for seed in range(5):
        g = random_unweighted(30, 4.0, seed + 7)
        adj = undirected_adjacency(
            [(int(a), int(b), w) for (a, b), w
             in zip(g.edge_array(), g.edge_weight_array())])
        for v in range(g.node_count):
            adj.setdefault(v, {})
        rng = np.random.default_rng(seed)
        for _ in range(40):
            i, j = rng.choice(g.node_count, size=2, replace=False)
            for kind in ("cn", "ra", "pa", "jaccard", "aa", "hp", "lhn"):
                got = hl.two_hop_index(g, M(kind), int(i), int(j))
                want = brute_two_hop_index(adj, kind, int(i), int(j))
                assert got == pytest.approx(want, rel=1e-12, abs=1e-15)


def test_two_hop_symmetry_and_integrality():
    g = random_unweighted(25, 4.0, 19)
    rng = np.random.default_rng(4)
    for _ in range(30):
        i, j = map(int, rng.choice(g.node_count, size=2, replace=False))
        for kind in M:
            if kind == M.L3:
                assert hl.l3_score(g, i, j) == pytest.approx(
                    hl.l3_score(g, j, i), rel=1e-12, abs=1e-300)
                continue
            a = hl.two_hop_index(g, kind, i, j)
            b = hl.two_hop_index(g, kind, j, i)
            assert a == pytest.approx(b, rel=1e-12, abs=1e-300)
            assert a >= 0
            if kind in (M.CN, M.PA):
                assert a == int(a)


def test_cn_equals_connector_counts():
    g = random_unweighted(30, 4.0, 23)
    q = hl.two_hop_connector_counts(g)
    rng = np.random.default_rng(6)
    for _ in range(50):
        i, j = map(int, rng.choice(g.node_count, size=2, replace=False))
        assert hl.two_hop_index(g, M.CN, i, j) == q.get(i, j)


def test_isolated_ratio_indices_are_zero():
    g = mk_graph([(1, 2, 1.0)], nodes=[8, 9])
    i, j = ix(g, 8, 9)
    assert hl.two_hop_index(g, M.JACCARD, i, j) == 0.0
    assert hl.two_hop_index(g, M.HP, i, j) == 0.0
    assert hl.two_hop_index(g, M.LHN, i, j) == 0.0


def test_l3_fixture_values():
    g = mk_unweighted([(1, 2), (2, 3), (2, 4), (3, 5), (4, 5)])
    got = hl.l3_score(g, *ix(g, 1, 5))
    assert got == pytest.approx(2 / math.sqrt(6), rel=1e-12)
    assert got == pytest.approx(0.8165, abs=5e-5)

    star = mk_unweighted([("h", leaf) for leaf in "abcde"])
    assert hl.l3_score(star, *ix(star, "a", "b")) == 0.0

    path = mk_unweighted([(1, 2), (2, 3), (3, 4)])
    assert hl.l3_score(path, *ix(path, 1, 4)) == pytest.approx(0.5, rel=1e-12)


def test_l3_matches_brute_force():
    for seed in range(5):
        g = random_unweighted(30, 4.0, seed + 50)
        adj = undirected_adjacency(
            [(int(a), int(b), w) for (a, b), w
             in zip(g.edge_array(), g.edge_weight_array())])
        for v in range(g.node_count):
            adj.setdefault(v, {})
        rng = np.random.default_rng(seed)
        for _ in range(25):
            i, j = map(int, rng.choice(g.node_count, size=2, replace=False))
            assert hl.l3_score(g, i, j) == pytest.approx(
                brute_l3(adj, i, j), rel=1e-12, abs=1e-300)


def test_l3_ignores_weights():
    heavy = mk_graph([(1, 2, 9), (2, 3, 4), (3, 4, 7)])
    light = mk_unweighted([(1, 2), (2, 3), (3, 4)])
    assert hl.l3_score(heavy, *ix(heavy, 1, 4)) == hl.l3_score(light, *ix(light, 1, 4))


def test_batch_scoring_matches_scalar():
    g = random_unweighted(40, 5.0, 61)
    rng = np.random.default_rng(8)
    pairs = []
    while len(pairs) < 60:
        i, j = map(int, rng.choice(g.node_count, size=2, replace=False))
        pairs.append((i, j))
    pairs = np.asarray(pairs)
    for kind in M:
        batch = hl.score_candidates(g, kind, pairs)
        for t, (i, j) in enumerate(pairs):
            if kind == M.L3:
                want = hl.l3_score(g, int(i), int(j))
            else:
                want = hl.two_hop_index(g, kind, int(i), int(j))
            assert batch[t] == pytest.approx(want, rel=1e-12, abs=1e-15)


def test_batch_scoring_accepts_edges():
    g = square()
    e = g.edge_array()
    out = hl.score_candidates(g, M.CN, e)
    assert out.shape[0] == e.shape[0]


def test_two_hop_rejects_l3_and_self_pairs():
    g = square()
    with pytest.raises(ValueError):
        hl.two_hop_index(g, M.L3, 0, 1)
    with pytest.raises(ValueError):
        hl.two_hop_index(g, M.CN, 1, 1)
    with pytest.raises(ValueError):
        hl.l3_score(g, 2, 2)
