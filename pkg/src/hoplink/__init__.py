"""Weighted three-hop link prediction for sparse, hub-dominated networks.

The package bundles the H3 scoring index (normative per-path definition,
sparse-matrix bulk pipeline, per-path explanations), the classical two-hop
baselines plus L3, the two-task evaluation protocol with its ranking
metrics, the 17-configuration sensitivity grid, and a file-based CLI.
"""

from .baselines import BaselineMethod, l3_score, score_candidates, two_hop_index
from .errors import DataError, DegenerateTaskError, StaleCountsError
from .evaluation import (EvalTask, MetricsReport, NegativeSample,
                         PerSourceMetrics, TaskKind,
                         assemble_cross_period_task, compute_global_metrics,
                         compute_source_metrics, evaluate_scores,
                         make_cross_period_task, make_within_period_task,
                         per_source_metrics, sample_negatives,
                         split_within_period, task_candidates)
from .graph import (TwoHopConnectorCounts, WeightedGraph, build_graph,
                    candidate_pairs_within_two_hops, from_index_edges,
                    two_hop_connector_counts, weighted_degree)
from .h3 import (H3Params, PathEvidence, ScoredPair, ScoredPairs,
                 explain_pair, h3_directed_score, h3_score_all,
                 h3_symmetrized_score)
from .io import parse_edge_list, read_config, read_report_jsonl, write_report
from .sweep import (Regime, RegimeLabel, SweepConfig, SweepGroup,
                    assign_ratio_quartiles, average_degree, expansion_ratio,
                    run_sensitivity_sweep, sensitivity_grid,
                    stratify_by_average_degree)
from .synth import referral_graph, random_weighted_graph

__version__ = "0.1.0"

__all__ = [
    "BaselineMethod", "DataError", "DegenerateTaskError", "EvalTask",
    "H3Params", "MetricsReport", "NegativeSample", "PathEvidence", "Regime",
    "RegimeLabel", "ScoredPair", "ScoredPairs", "StaleCountsError",
    "SweepConfig", "SweepGroup", "TaskKind", "TwoHopConnectorCounts",
    "WeightedGraph", "assemble_cross_period_task", "assign_ratio_quartiles",
    "average_degree", "build_graph", "candidate_pairs_within_two_hops",
    "compute_global_metrics", "compute_source_metrics", "evaluate_scores",
    "expansion_ratio", "explain_pair", "from_index_edges",
    "h3_directed_score", "h3_score_all", "h3_symmetrized_score", "l3_score",
    "make_cross_period_task", "make_within_period_task", "parse_edge_list",
    "PerSourceMetrics", "per_source_metrics",
    "read_config", "read_report_jsonl", "referral_graph",
    "random_weighted_graph", "run_sensitivity_sweep", "sample_negatives",
    "score_candidates", "sensitivity_grid", "split_within_period",
    "stratify_by_average_degree", "task_candidates", "two_hop_connector_counts",
    "two_hop_index", "weighted_degree", "write_report",
]
