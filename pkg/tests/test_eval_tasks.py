import numpy as np
import pytest

import hoplink as hl
from helpers import edge_list_of, mk_graph, mk_unweighted, pair_set


def ten_edge_graph():
    pairs = [(1, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7),
             (7, 8), (8, 9), (9, 10)]
    return mk_graph([(a, b, float(10 * a + b)) for a, b in pairs])


def test_split_cardinality_and_disjointness():
    g = ten_edge_graph()
    train, positives = hl.split_within_period(g, 0.5, seed=3)
    assert train.edge_count == 5
    assert positives.shape[0] == 5
    train_set = pair_set(train, train.edge_array())
    pos_set = pair_set(g, positives)
    assert not train_set & pos_set


def test_split_union_restores_graph_and_preserves_weights():
    g = ten_edge_graph()
    train, positives = hl.split_within_period(g, 0.5, seed=9)
    assert pair_set(train, train.edge_array()) | pair_set(g, positives) \
        == pair_set(g, g.edge_array())
    original = dict(((a, b), w) for a, b, w in edge_list_of(g))
    for a, b, w in edge_list_of(train):
        assert original[(a, b)] == w
    # full node universe kept: indices comparable between g and train
    assert train.node_ids == g.node_ids


def test_split_deterministic_and_seed_sensitive():
    g = ten_edge_graph()
    t1, p1 = hl.split_within_period(g, 0.5, seed=4)
    t2, p2 = hl.split_within_period(g, 0.5, seed=4)
    assert t1.fingerprint == t2.fingerprint
    assert np.array_equal(p1, p2)
    t3, p3 = hl.split_within_period(g, 0.5, seed=5)
    assert t1.fingerprint != t3.fingerprint or not np.array_equal(p1, p3)


def test_split_ratio_ceiling_and_rejections():
    g = ten_edge_graph()
    train, _ = hl.split_within_period(g, 0.55, seed=0)
    assert train.edge_count == 6  # ceil(5.5)
    with pytest.raises(ValueError):
        hl.split_within_period(g, 0.0, seed=0)
    with pytest.raises(ValueError):
        hl.split_within_period(g, 1.0, seed=0)
    tiny = mk_graph([(1, 2, 1.0)])
    with pytest.raises(hl.DegenerateTaskError):
        hl.split_within_period(tiny, 0.5, seed=0)


def test_split_balanced_over_seeds():
    g = ten_edge_graph()
    counts = {pair: 0 for pair in pair_set(g, g.edge_array())}
    n_seeds = 10
    for seed in range(n_seeds):
        train, _ = hl.split_within_period(g, 0.5, seed=seed)
        for pair in pair_set(train, train.edge_array()):
            counts[pair] += 1
    sigma = (n_seeds * 0.25) ** 0.5
    for pair, c in counts.items():
        assert abs(c - n_seeds / 2) <= 3 * sigma


def test_cross_period_positives_fixture():
    g_short = hl.build_graph([("a", "b", 1.0)], nodes=["c"])
    g_long = hl.build_graph([("a", "b", 1.0), ("b", "c", 1.0)])
    positives = hl.assemble_cross_period_task(g_short, g_long)
    assert pair_set(g_short, positives) == {("b", "c")}


def test_cross_period_rejects_no_new_links():
    g_short = hl.build_graph([("a", "b", 1.0), ("b", "c", 1.0)])
    g_long = hl.build_graph([("a", "b", 2.0)], nodes=["c"])
    with pytest.raises(hl.DegenerateTaskError):
        hl.assemble_cross_period_task(g_short, g_long)


def test_cross_period_restricts_to_shared_nodes():
    g_short = hl.build_graph([("a", "b", 1.0)], nodes=["c"])
    g_long = hl.build_graph([("a", "b", 1.0), ("a", "c", 1.0),
                             ("x", "y", 1.0), ("a", "x", 1.0)])
    positives = hl.assemble_cross_period_task(g_short, g_long)
    # (x, y) and (a, x) excluded: x, y absent from the short window
    assert pair_set(g_short, positives) == {("a", "c")}


def test_cross_period_disjoint_universes_rejected():
    g_short = hl.build_graph([("a", "b", 1.0)])
    g_long = hl.build_graph([("x", "y", 1.0)])
    with pytest.raises(hl.DegenerateTaskError):
        hl.assemble_cross_period_task(g_short, g_long)


def test_negative_sampling_counts_and_disjointness():
    g = hl.random_weighted_graph(60, 5.0, 17)
    train, positives = hl.split_within_period(g, 0.5, seed=17)
    sample = hl.sample_negatives(train, g.edge_array(), positives, 3, seed=17)
    pool = hl.candidate_pairs_within_two_hops(train)
    pool_set = {tuple(p) for p in pool.tolist()}
    pos_set = {tuple(sorted(p)) for p in positives.tolist()}
    edge_set = {tuple(sorted(p)) for p in g.edge_array().tolist()}
    neg_set = {tuple(p) for p in sample.pairs.tolist()}
    assert len(neg_set) == min(3 * len(positives), len(pool_set - pos_set - edge_set))
    assert not neg_set & pos_set
    assert not neg_set & edge_set
    assert neg_set <= pool_set


def test_negative_sampling_truncation_flag():
    g = mk_unweighted([(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)])
    train, positives = hl.split_within_period(g, 0.5, seed=2)
    sample = hl.sample_negatives(train, g.edge_array(), positives, 20, seed=2)
    assert sample.truncated
    assert sample.pairs.shape[0] < 20 * len(positives)


def test_negative_sampling_deterministic():
    g = hl.random_weighted_graph(80, 8.0, 23)
    train, positives = hl.split_within_period(g, 0.5, seed=23)
    s1 = hl.sample_negatives(train, g.edge_array(), positives, 2, seed=8)
    s2 = hl.sample_negatives(train, g.edge_array(), positives, 2, seed=8)
    assert not s1.truncated  # a real subsample, not pool exhaustion
    assert np.array_equal(s1.pairs, s2.pairs)
    s3 = hl.sample_negatives(train, g.edge_array(), positives, 2, seed=9)
    assert not np.array_equal(s1.pairs, s3.pairs)


def test_negative_sampling_rejects_empty_pool_and_bad_ratio():
    g = mk_unweighted([(1, 2), (3, 4)])  # no two-hop pairs at all
    with pytest.raises(hl.DegenerateTaskError):
        hl.sample_negatives(g, g.edge_array(), np.zeros((0, 2), dtype=int),
                            20, seed=0)
    g2 = ten_edge_graph()
    with pytest.raises(ValueError):
        hl.sample_negatives(g2, g2.edge_array(), np.zeros((0, 2), dtype=int),
                            0, seed=0)


def test_make_within_period_task_full_protocol():
    g = hl.random_weighted_graph(80, 6.0, 31)
    task = hl.make_within_period_task(g, ratio=0.5, neg_ratio=20, seed=31)
    assert task.task_kind == hl.TaskKind.WITHIN_PERIOD
    assert task.seed == 31
    assert task.negatives.shape[0] <= 20 * task.positives.shape[0]
    pairs, labels = hl.task_candidates(task)
    assert pairs.shape[0] == task.positives.shape[0] + task.negatives.shape[0]
    assert labels.sum() == task.positives.shape[0]
    keys = pairs[:, 0] * g.node_count + pairs[:, 1]
    assert np.all(np.diff(keys) > 0)  # canonical order, no duplicates


def test_make_cross_period_task_full_protocol():
    rng = np.random.default_rng(5)
    g_long = hl.random_weighted_graph(50, 6.0, 41)
    edges = g_long.edge_array()
    take = np.sort(rng.choice(edges.shape[0], size=edges.shape[0] // 2,
                              replace=False))
    g_short = hl.from_index_edges(g_long.node_count, edges[take, 0],
                                  edges[take, 1],
                                  g_long.edge_weight_array()[take],
                                  node_ids=g_long.node_ids)
    task = hl.make_cross_period_task(g_short, g_long, neg_ratio=5, seed=1)
    assert task.task_kind == hl.TaskKind.CROSS_PERIOD
    assert task.train.fingerprint == g_short.fingerprint  # train unchanged
    pos_set = {tuple(p) for p in task.positives.tolist()}
    short_edges = {tuple(sorted(p)) for p in g_short.edge_array().tolist()}
    long_edges = {tuple(sorted(p)) for p in g_long.edge_array().tolist()}
    assert pos_set <= long_edges - short_edges
    neg_set = {tuple(p) for p in task.negatives.tolist()}
    assert not neg_set & long_edges
