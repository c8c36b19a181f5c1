from dataclasses import fields

import pytest

import hoplink as hl
from hoplink import Regime, SweepGroup
from helpers import mk_unweighted


def test_grid_has_exactly_17_configs():
    grid = hl.sensitivity_grid()
    assert len(grid) == 17
    by_group = {}
    for c in grid:
        by_group.setdefault(c.group, []).append(c)
    assert len(by_group[SweepGroup.DEGREE_NORMALIZATION]) == 5
    assert len(by_group[SweepGroup.PATH_WEIGHT]) == 4
    assert len(by_group[SweepGroup.DIRECTIONALITY]) == 5
    assert len(by_group[SweepGroup.PENALTY]) == 3


def test_grid_values_match_published_settings():
    grid = hl.sensitivity_grid()
    g1 = {(c.params.beta, c.params.gamma)
          for c in grid if c.group == SweepGroup.DEGREE_NORMALIZATION}
    assert g1 == {(0.0, 0.0), (0.2, 0.2), (0.5, 0.5), (0.8, 0.2), (1.0, 1.0)}
    g2 = {c.params.alpha for c in grid if c.group == SweepGroup.PATH_WEIGHT}
    assert g2 == {0.0, 0.3, 1.0, 2.0}
    g3 = {c.params.epsilon for c in grid if c.group == SweepGroup.DIRECTIONALITY}
    assert g3 == {0.0, 0.2, 0.5, 0.8, 1.0}
    g4 = {c.params.eta for c in grid if c.group == SweepGroup.PENALTY}
    assert g4 == {0.0, 0.5, 1.0}
    unweighted = next(c for c in grid if c.label == "Unweighted")
    assert unweighted.params.alpha == 0.0
    defaults = hl.H3Params()
    for f in ("beta", "gamma", "eta", "p_min", "epsilon"):
        assert getattr(unweighted.params, f) == getattr(defaults, f)


def test_grid_configs_deviate_only_in_their_group_dimension():
    defaults = hl.H3Params()
    dims = {
        SweepGroup.DEGREE_NORMALIZATION: {"beta", "gamma"},
        SweepGroup.PATH_WEIGHT: {"alpha"},
        SweepGroup.DIRECTIONALITY: {"epsilon"},
        SweepGroup.PENALTY: {"eta"},
    }
    for c in hl.sensitivity_grid():
        for f in fields(hl.H3Params):
            if f.name not in dims[c.group]:
                assert getattr(c.params, f.name) == getattr(defaults, f.name)


def test_grid_is_pure_and_stable():
    assert hl.sensitivity_grid() == hl.sensitivity_grid()


def test_penalty_off_config_forces_unit_penalty():
    off = next(c for c in hl.sensitivity_grid() if c.label == "Off")
    g = mk_unweighted([(1, 2), (2, 3), (2, 4), (3, 5), (4, 5)])
    q = hl.two_hop_connector_counts(g)
    forward, reverse = hl.explain_pair(g, q, off.params,
                                       g.index_of("1"), g.index_of("5"))
    for ev in forward + reverse:
        assert ev.penalty == 1.0


def _named_graphs(avg_degrees):
    out = []
    for t, d in enumerate(avg_degrees):
        n = 30
        g = hl.random_weighted_graph(n, d, seed=t)
        out.append((f"net{t:02d}", g))
    return out


def test_stratification_even_split():
    networks = _named_graphs([1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
    labels = hl.stratify_by_average_degree(networks)
    ordered = sorted(networks, key=lambda kv: hl.average_degree(kv[1]))
    regimes = [labels[name].regime for name, _ in ordered]
    assert regimes == [Regime.LOW, Regime.LOW, Regime.MID, Regime.MID,
                       Regime.HIGH, Regime.HIGH]


def test_stratification_remainder_to_lower_tertiles():
    networks = _named_graphs([1, 2, 3, 4, 5, 6, 7])
    labels = hl.stratify_by_average_degree(networks)
    counts = {Regime.LOW: 0, Regime.MID: 0, Regime.HIGH: 0}
    for lab in labels.values():
        counts[lab.regime] += 1
    assert (counts[Regime.LOW], counts[Regime.MID], counts[Regime.HIGH]) \
        == (3, 2, 2)


def test_stratification_tie_broken_by_name():
    g = mk_unweighted([(1, 2), (2, 3)])
    same = [("b", g), ("a", g), ("c", g)]
    labels = hl.stratify_by_average_degree(same)
    assert labels["a"].regime == Regime.LOW
    assert labels["b"].regime == Regime.MID
    assert labels["c"].regime == Regime.HIGH


def test_stratification_permutation_invariant_and_bounds():
    networks = _named_graphs([2, 7, 4, 9, 5, 3])
    a = hl.stratify_by_average_degree(networks)
    b = hl.stratify_by_average_degree(list(reversed(networks)))
    assert a == b
    some = next(iter(a.values()))
    assert some.boundary_low <= some.boundary_high


def test_stratification_needs_three_networks():
    with pytest.raises(ValueError):
        hl.stratify_by_average_degree(_named_graphs([1, 2]))


def test_expansion_ratio():
    g100 = hl.random_weighted_graph(60, 4.0, 1)
    e = g100.edge_array()
    w = g100.edge_weight_array()
    half = hl.from_index_edges(g100.node_count, e[: e.shape[0] // 2, 0],
                               e[: e.shape[0] // 2, 1], w[: e.shape[0] // 2],
                               node_ids=g100.node_ids)
    assert hl.expansion_ratio(half, g100) == pytest.approx(
        g100.edge_count / half.edge_count)
    assert hl.expansion_ratio(g100, g100) == 1.0
    empty = hl.build_graph([], nodes=["a", "b"])
    with pytest.raises(ValueError):
        hl.expansion_ratio(empty, g100)


def test_ratio_quartiles():
    q = hl.assign_ratio_quartiles([1.1, 1.3, 1.6, 2.0])
    assert q.tolist() == [1, 2, 3, 4]
    q = hl.assign_ratio_quartiles([2.0, 1.1, 1.6, 1.3])
    assert q.tolist() == [4, 1, 3, 2]
    tied = hl.assign_ratio_quartiles([1.0, 1.0, 2.0, 3.0])
    assert tied[0] == tied[1]


def test_run_sensitivity_sweep_produces_17_records_per_seed():
    g = hl.random_weighted_graph(60, 6.0, 3)
    records = hl.run_sensitivity_sweep(g, seeds=[1, 2], neg_ratio=5, k=10,
                                       network="toy")
    assert len(records) == 34
    labels = {(r["group"], r["label"]) for r in records}
    assert len(labels) == 17
    for r in records:
        assert r["network"] == "toy"
        assert 0.0 <= r["auroc"] <= 1.0
        assert r["seed"] in (1, 2)
    # same seed, same config -> identical metrics on re-run (purity)
    again = hl.run_sensitivity_sweep(g, seeds=[1, 2], neg_ratio=5, k=10,
                                     network="toy")
    assert records == again
