"""Evaluation protocol: within-period and cross-period task construction,
two-hop-restricted negative sampling at a fixed ratio, and the ranking
metrics (global and per-source).

Tie handling is midrank-based for the global metrics, so every metric is
invariant under permutations of equal-scored items; per-source rankings
break ties deterministically by candidate position instead, because the
source metrics need one concrete ordering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np
from scipy.stats import rankdata

from .errors import DegenerateTaskError
from .graph import (WeightedGraph, candidate_pairs_within_two_hops,
                    from_index_edges)


class TaskKind(Enum):
    WITHIN_PERIOD = "within_period"
    CROSS_PERIOD = "cross_period"


@dataclass(frozen=True, eq=False)
class EvalTask:
    """A train graph plus labeled candidate pairs for one evaluation run."""

    train: WeightedGraph
    positives: np.ndarray
    negatives: np.ndarray
    task_kind: TaskKind
    seed: int
    negatives_truncated: bool = False


class NegativeSample(NamedTuple):
    pairs: np.ndarray
    truncated: bool


class GlobalMetrics(NamedTuple):
    auroc: float
    auprc: float
    mrp: float


class SourceMetrics(NamedTuple):
    source_mrr: float
    ndcg_at_k: float
    sp_at_k: float
    sl_at_k: float
    n_sources: int


@dataclass(frozen=True)
class MetricsReport:
    """The ranking metrics of one evaluation run plus its run metadata."""

    auroc: float
    auprc: float
    mrp: float
    source_mrr: float
    ndcg_at_k: float
    sp_at_k: float
    sl_at_k: float
    k: int
    n_positives: int
    n_negatives: int
    n_sources: int
    seed: int


def _pair_keys(pairs: np.ndarray, n: int) -> np.ndarray:
    lo = np.minimum(pairs[:, 0], pairs[:, 1]).astype(np.int64)
    hi = np.maximum(pairs[:, 0], pairs[:, 1]).astype(np.int64)
    return lo * np.int64(n) + hi


def split_within_period(g: WeightedGraph, ratio: float, seed: int
                        ) -> tuple[WeightedGraph, np.ndarray]:
    """Partition edges uniformly at random into a train graph and held-out
    positive pairs.

    The train graph keeps ceil(ratio * |E|) edges with their original
    weights and the full node universe of ``g`` (indices stay comparable);
    positives are the removed pairs, weights discarded. Deterministic for a
    fixed seed.
    """
    if not 0.0 < ratio < 1.0:
        raise ValueError("split ratio must lie strictly between 0 and 1")
    m = g.edge_count
    if m < 2:
        raise DegenerateTaskError("cannot split a graph with fewer than 2 edges")
    edges = g.edge_array()
    weights = g.edge_weight_array()
    rng = np.random.default_rng(seed)
    perm = rng.permutation(m)
    keep = math.ceil(ratio * m)
    train_sel = np.sort(perm[:keep])
    pos_sel = np.sort(perm[keep:])
    train = from_index_edges(g.node_count, edges[train_sel, 0],
                             edges[train_sel, 1], weights[train_sel],
                             node_ids=g.node_ids)
    return train, edges[pos_sel].copy()


def _long_edges_in_short_index(g_short: WeightedGraph, g_long: WeightedGraph
                               ) -> np.ndarray:
    """Long-window edges whose endpoints exist in the short window, as
    canonically sorted pairs in the short graph's index space."""
    short_ids = g_short._id_to_index
    long_to_short = np.full(g_long.node_count, -1, dtype=np.int64)
    for idx, nid in enumerate(g_long.node_ids):
        mapped = short_ids.get(nid)
        if mapped is not None:
            long_to_short[idx] = mapped
    if not np.any(long_to_short >= 0):
        raise DegenerateTaskError("node universes do not overlap")
    long_edges = g_long.edge_array()
    a = long_to_short[long_edges[:, 0]]
    b = long_to_short[long_edges[:, 1]]
    ok = (a >= 0) & (b >= 0)
    lo = np.minimum(a[ok], b[ok])
    hi = np.maximum(a[ok], b[ok])
    order = np.argsort(lo * np.int64(g_short.node_count) + hi)
    return np.column_stack([lo[order], hi[order]])


def assemble_cross_period_task(g_short: WeightedGraph, g_long: WeightedGraph
                               ) -> np.ndarray:
    """Positive pairs for cross-period prediction: edges of the long-window
    network, restricted to nodes present in the short window, that are not
    edges of the short window. Returned in the short graph's index space."""
    mapped = _long_edges_in_short_index(g_short, g_long)
    keys = _pair_keys(mapped, g_short.node_count)
    ekeys = g_short.edge_keys
    if ekeys.shape[0]:
        pos = np.minimum(np.searchsorted(ekeys, keys), ekeys.shape[0] - 1)
        new = ekeys[pos] != keys
    else:
        new = np.ones(keys.shape[0], dtype=bool)
    if not np.any(new):
        raise DegenerateTaskError(
            "long window adds no new links over the short window")
    return mapped[new]


def sample_negatives(train: WeightedGraph, eval_edges: np.ndarray,
                     positives: np.ndarray, ratio: int, seed: int
                     ) -> NegativeSample:
    """Sample negative pairs uniformly without replacement, seeded.

    The pool is every unordered pair within two hops of the train network
    that is neither a positive nor an edge of the evaluation snapshot.
    Draws ``ratio * |positives|`` pairs, or the whole pool when smaller
    (flagged as truncated).
    """
    if ratio < 1:
        raise ValueError("negative sampling ratio must be >= 1")
    n = train.node_count
    pool = candidate_pairs_within_two_hops(train)
    pool_keys = _pair_keys(pool, n)
    excluded = [np.zeros(0, dtype=np.int64)]
    if len(positives):
        excluded.append(_pair_keys(np.asarray(positives, dtype=np.int64), n))
    if len(eval_edges):
        excluded.append(_pair_keys(np.asarray(eval_edges, dtype=np.int64), n))
    keep = ~np.isin(pool_keys, np.concatenate(excluded))
    pool = pool[keep]
    if pool.shape[0] == 0:
        raise DegenerateTaskError("negative sampling pool is empty")
    target = ratio * len(positives)
    rng = np.random.default_rng(seed)
    if pool.shape[0] <= target:
        return NegativeSample(pairs=pool, truncated=pool.shape[0] < target)
    take = np.sort(rng.choice(pool.shape[0], size=target, replace=False))
    return NegativeSample(pairs=pool[take], truncated=False)


def make_within_period_task(g: WeightedGraph, ratio: float = 0.5,
                            neg_ratio: int = 20, seed: int = 0) -> EvalTask:
    """Build a within-period task: split, then sample negatives against the
    full snapshot's edge set."""
    train, positives = split_within_period(g, ratio, seed)
    if positives.shape[0] == 0:
        raise DegenerateTaskError("split produced no held-out positives")
    negatives = sample_negatives(train, g.edge_array(), positives, neg_ratio, seed)
    return EvalTask(train=train, positives=positives, negatives=negatives.pairs,
                    task_kind=TaskKind.WITHIN_PERIOD, seed=seed,
                    negatives_truncated=negatives.truncated)


def make_cross_period_task(g_short: WeightedGraph, g_long: WeightedGraph,
                           neg_ratio: int = 20, seed: int = 0) -> EvalTask:
    """Build a cross-period task: train on the short window unchanged,
    positives are the long window's new links, negatives sampled against
    both windows' edges."""
    positives = assemble_cross_period_task(g_short, g_long)
    eval_edges = _long_edges_in_short_index(g_short, g_long)
    negatives = sample_negatives(g_short, eval_edges, positives, neg_ratio, seed)
    return EvalTask(train=g_short, positives=positives, negatives=negatives.pairs,
                    task_kind=TaskKind.CROSS_PERIOD, seed=seed,
                    negatives_truncated=negatives.truncated)


def task_candidates(task: EvalTask) -> tuple[np.ndarray, np.ndarray]:
    """Candidate pairs (positives plus negatives) in canonical order, with
    binary labels aligned."""
    pairs = np.concatenate([task.positives, task.negatives])
    labels = np.concatenate([
        np.ones(len(task.positives), dtype=np.int64),
        np.zeros(len(task.negatives), dtype=np.int64),
    ])
    keys = _pair_keys(pairs, task.train.node_count)
    order = np.argsort(keys, kind="stable")
    lo = np.minimum(pairs[:, 0], pairs[:, 1])
    hi = np.maximum(pairs[:, 0], pairs[:, 1])
    return np.column_stack([lo, hi])[order], labels[order]


def _validate_scored(scores: np.ndarray, labels: np.ndarray) -> None:
    if scores.shape != labels.shape or scores.ndim != 1:
        raise ValueError("scores and labels must be equal-length vectors")
    if not np.all(np.isfinite(scores)):
        raise ValueError("scores must be finite")
    if not np.all((labels == 0) | (labels == 1)):
        raise ValueError("labels must be binary")
    n_pos = int(labels.sum())
    if n_pos == 0 or n_pos == labels.shape[0]:
        raise ValueError("need at least one positive and one negative")


def compute_global_metrics(scores, labels) -> GlobalMetrics:
    """AUROC, AUPRC and mean rank percentile over one candidate list.

    AUROC uses the rank-statistic form with midranks. AUPRC is average
    precision with tied blocks contributing their expected precision under
    random within-block order. MRP averages positives' descending midranks
    divided by the candidate count (lower is better).
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    _validate_scored(scores, labels)
    n = scores.shape[0]
    pos = labels == 1
    n_pos = int(pos.sum())
    n_neg = n - n_pos

    asc_ranks = rankdata(scores)
    auroc = (asc_ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)
    desc_ranks = n + 1.0 - asc_ranks
    mrp = float(np.mean(desc_ranks[pos]) / n)

    order = np.argsort(-scores, kind="stable")
    s_sorted = scores[order]
    y_sorted = pos[order].astype(np.float64)
    block_starts = np.r_[0, np.flatnonzero(np.diff(s_sorted)) + 1]
    block_sizes = np.diff(np.r_[block_starts, n]).astype(np.float64)
    block_pos = np.add.reduceat(y_sorted, block_starts)
    pos_before = np.cumsum(block_pos) - block_pos

    # expected precision contribution at each global rank r inside a tied
    # block: (p/b) * (P_before + 1 + (p-1)(t-1)/(b-1)) / r
    r = np.arange(1, n + 1, dtype=np.float64)
    t = r - np.repeat(block_starts, block_sizes.astype(np.int64))
    b = np.repeat(block_sizes, block_sizes.astype(np.int64))
    p = np.repeat(block_pos, block_sizes.astype(np.int64))
    before = np.repeat(pos_before, block_sizes.astype(np.int64))
    slope = np.where(b > 1, (p - 1) / np.maximum(b - 1, 1), 0.0)
    density = (p / b) * (before + 1.0 + slope * (t - 1.0)) / r
    auprc = float(density.sum() / n_pos)
    return GlobalMetrics(auroc=float(auroc), auprc=auprc, mrp=mrp)


class PerSourceMetrics(NamedTuple):
    """Per-source metric values for every source holding >= 1 positive."""

    sources: np.ndarray
    mrr: np.ndarray
    ndcg: np.ndarray
    sp: np.ndarray
    lift: np.ndarray


def per_source_metrics(pairs, scores, labels, k: int = 100,
                       random_baseline_precision: float | None = None,
                       sp_recall: bool = True) -> PerSourceMetrics:
    """Per-source retrieval metrics (the kernel behind the reported means).

    Every unordered pair enters both endpoints' source lists; only sources
    with at least one positive count. Per source, items are ranked by score
    (descending), ties broken by candidate position. MRR takes the best
    positive's reciprocal rank; NDCG@k uses binary gains 1/log2(1 + rank)
    against the ideal ordering; SP@k is the fraction of the source's
    positives retrieved in the top k (set ``sp_recall=False`` for the
    precision-flavored variant); the lift divides top-min(k, list length)
    precision by the supplied random-baseline precision.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if random_baseline_precision is None or not 0.0 < random_baseline_precision < 1.0:
        raise ValueError("random_baseline_precision must lie in (0, 1)")
    pairs = np.asarray(pairs, dtype=np.int64)
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    _validate_scored(scores, labels)

    m = pairs.shape[0]
    src = np.concatenate([pairs[:, 0], pairs[:, 1]])
    sc = np.tile(scores, 2)
    lb = np.tile(labels, 2)
    tiebreak = np.tile(np.arange(m, dtype=np.int64), 2)
    order = np.lexsort((tiebreak, -sc, src))
    src, lb = src[order], lb[order]

    total = src.shape[0]
    starts = np.r_[0, np.flatnonzero(np.diff(src)) + 1]
    seg_len = np.diff(np.r_[starts, total])
    rank1 = np.arange(total, dtype=np.int64) - np.repeat(starts, seg_len) + 1

    is_pos = lb == 1
    npos = np.add.reduceat(is_pos.astype(np.int64), starts)
    eligible = npos >= 1
    if not np.any(eligible):
        raise ValueError("no source node has a positive candidate")

    first_pos = np.minimum.reduceat(
        np.where(is_pos, rank1, total + 1), starts)
    mrr = 1.0 / first_pos[eligible]

    in_top = is_pos & (rank1 <= k)
    gains = np.where(in_top, 1.0 / np.log2(1.0 + rank1), 0.0)
    dcg = np.add.reduceat(gains, starts)
    ideal = np.cumsum(1.0 / np.log2(1.0 + np.arange(1, k + 1, dtype=np.float64)))
    idcg = ideal[np.minimum(npos[eligible], k) - 1]
    ndcg = dcg[eligible] / idcg

    hits = np.add.reduceat(in_top.astype(np.float64), starts)
    if sp_recall:
        sp = hits[eligible] / npos[eligible]
    else:
        sp = hits[eligible] / np.minimum(seg_len, k)[eligible]
    k_prime = np.minimum(seg_len, k)
    lift = (hits[eligible] / k_prime[eligible]) / random_baseline_precision

    return PerSourceMetrics(sources=src[starts][eligible], mrr=mrr,
                            ndcg=ndcg, sp=sp, lift=lift)


def compute_source_metrics(pairs, scores, labels, k: int = 100,
                           random_baseline_precision: float | None = None,
                           sp_recall: bool = True) -> SourceMetrics:
    """Source-level retrieval metrics averaged over eligible source nodes
    (see :func:`per_source_metrics` for the per-source definitions)."""
    per = per_source_metrics(pairs, scores, labels, k=k,
                             random_baseline_precision=random_baseline_precision,
                             sp_recall=sp_recall)
    return SourceMetrics(
        source_mrr=float(np.mean(per.mrr)),
        ndcg_at_k=float(np.mean(per.ndcg)),
        sp_at_k=float(np.mean(per.sp)),
        sl_at_k=float(np.mean(per.lift)),
        n_sources=int(per.sources.shape[0]),
    )


def evaluate_scores(pairs, scores, labels, k: int = 100, seed: int = 0
                    ) -> MetricsReport:
    """Assemble the full report for one scored candidate list. The lift
    baseline is the list's own positive rate, as in the 20:1 protocol."""
    labels = np.asarray(labels, dtype=np.int64)
    n_pos = int(labels.sum())
    n_neg = int(labels.shape[0] - n_pos)
    g = compute_global_metrics(scores, labels)
    baseline = n_pos / labels.shape[0]
    s = compute_source_metrics(pairs, scores, labels, k=k,
                               random_baseline_precision=baseline)
    return MetricsReport(
        auroc=g.auroc, auprc=g.auprc, mrp=g.mrp,
        source_mrr=s.source_mrr, ndcg_at_k=s.ndcg_at_k, sp_at_k=s.sp_at_k,
        sl_at_k=s.sl_at_k, k=k, n_positives=n_pos, n_negatives=n_neg,
        n_sources=s.n_sources, seed=seed,
    )
