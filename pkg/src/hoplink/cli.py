"""Command-line front end: file-based ingestion, scoring, evaluation,
sensitivity sweeps, and per-path explanations.

Everything is files in, files out; all randomness derives from the seeds in
the run manifest, so identical invocations produce byte-identical outputs
regardless of worker count. Exit codes: 0 success, 1 usage error, 2 data
error, 3 degenerate task.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .baselines import BaselineMethod, score_candidates
from .errors import DataError, DegenerateTaskError, StaleCountsError
from .evaluation import (evaluate_scores, make_cross_period_task,
                         make_within_period_task, task_candidates)
from .graph import (WeightedGraph, build_graph, candidate_pairs_within_two_hops,
                    two_hop_connector_counts)
from .h3 import H3Params, explain_pair, h3_score_all
from .io import parse_edge_list, read_config, write_report
from .sweep import run_sensitivity_sweep

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_DEGENERATE = 3

METHODS = ("h3", "cn", "ra", "pa", "jaccard", "aa", "hp", "lhn", "l3")

_PARAM_KEYS = ("alpha", "beta", "gamma", "eta", "p_min", "epsilon")

EXPLAIN_COLUMNS = ("i", "j", "direction", "k", "l", "w_ik", "w_kl", "w_lj",
                   "numerator", "n_k", "n_l", "n_j", "q", "penalty",
                   "contribution")

METRIC_COLUMNS = ("auroc", "auprc", "mrp", "source_mrr", "ndcg_at_k",
                  "sp_at_k", "sl_at_k", "k", "n_positives", "n_negatives",
                  "n_sources", "seed")


@dataclass
class RunManifest:
    """One fully-resolved run: command, inputs, parameters, seeds, output."""

    command: str
    input: str | None = None
    short: str | None = None
    long: str | None = None
    output: str = "report.csv"
    fmt: str = "csv"
    lenient: bool = False
    task: str = "a"
    methods: tuple[str, ...] = ("h3",)
    seeds: tuple[int, ...] = (1,)
    pairs: tuple[tuple[str, str], ...] = ()
    split_ratio: float = 0.5
    neg_ratio: int = 20
    top_k: int | None = None
    n_jobs: int = 1
    params: H3Params = field(default_factory=H3Params)

    def validate(self) -> None:
        if self.command in ("ingest", "score", "sweep", "explain") or (
                self.command == "evaluate" and self.task == "a"):
            if not self.input:
                raise ValueError(f"{self.command} requires an input edge list")
            _require_file(self.input)
        if self.command == "evaluate" and self.task == "b":
            if not self.short or not self.long:
                raise ValueError("task b requires --short and --long edge lists")
            _require_file(self.short)
            _require_file(self.long)
        if self.command in ("evaluate", "sweep") and not self.seeds:
            raise ValueError(f"{self.command} requires a non-empty seed list")
        if self.command == "explain" and not self.pairs:
            raise ValueError("explain requires at least one --pair")
        for m in self.methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r} (choose from {METHODS})")
        if self.fmt not in ("csv", "jsonl"):
            raise ValueError("format must be csv or jsonl")
        if not 0.0 < self.split_ratio < 1.0:
            raise ValueError("split_ratio must lie strictly between 0 and 1")
        if self.neg_ratio < 1:
            raise ValueError("neg_ratio must be >= 1")
        if self.top_k is not None and self.top_k < 1:
            raise ValueError("top_k must be >= 1")
        if self.n_jobs < 1:
            raise ValueError("threads must be >= 1")


def _require_file(path: str) -> None:
    if not Path(path).is_file():
        raise ValueError(f"input path {path!r} does not exist")


def _metrics_k(manifest: RunManifest) -> int:
    return manifest.top_k if manifest.top_k is not None else 100


def _load_graph(path: str, lenient: bool) -> WeightedGraph:
    return build_graph(parse_edge_list(path, lenient=lenient))


def _score_with(train, q_counts, params, method: str, pairs, n_jobs: int):
    if method == "h3":
        return h3_score_all(train, q_counts, params, pairs, n_jobs=n_jobs)
    return score_candidates(train, BaselineMethod(method), pairs, n_jobs=n_jobs)


def _cmd_ingest(m: RunManifest) -> None:
    g = _load_graph(m.input, m.lenient)
    record = {
        "input": m.input,
        "nodes": g.node_count,
        "edges": g.edge_count,
        "total_weight": g.total_weight,
        "avg_degree": (2.0 * g.edge_count / g.node_count) if g.node_count else 0.0,
        "max_degree": int(g.deg.max()) if g.node_count else 0,
        "isolated_nodes": int((g.deg == 0).sum()) if g.node_count else 0,
    }
    write_report([record], m.output, m.fmt)


def _cmd_score(m: RunManifest) -> None:
    g = _load_graph(m.input, m.lenient)
    q = two_hop_connector_counts(g)
    cand = candidate_pairs_within_two_hops(g, q)
    methods = m.methods
    columns = ["source", "target"]
    scores: dict[str, np.ndarray] = {}
    h3_result = None
    for name in methods:
        res = _score_with(g, q, m.params, name, cand, m.n_jobs)
        if name == "h3":
            h3_result = res
            scores["h3"] = res.score
            columns += ["h3", "h3_forward", "h3_reverse"]
        else:
            scores[name] = res
            columns.append(name)
    ranking = scores["h3"] if "h3" in scores else scores[methods[0]]
    order = np.lexsort((cand[:, 1], cand[:, 0], -ranking))
    if m.top_k is not None:
        order = order[:m.top_k]
    records = []
    for t in order:
        row = {"source": g.id_of(int(cand[t, 0])),
               "target": g.id_of(int(cand[t, 1]))}
        for name in methods:
            if name == "h3":
                row["h3"] = float(h3_result.score[t])
                row["h3_forward"] = float(h3_result.forward[t])
                row["h3_reverse"] = float(h3_result.reverse[t])
            else:
                row[name] = float(scores[name][t])
        records.append(row)
    write_report(records, m.output, m.fmt, fieldnames=columns)


def _evaluate_records(m: RunManifest) -> list[dict]:
    k = _metrics_k(m)
    records = []
    if m.task == "a":
        g = _load_graph(m.input, m.lenient)
    else:
        g_short = _load_graph(m.short, m.lenient)
        g_long = _load_graph(m.long, m.lenient)
    for seed in m.seeds:
        if m.task == "a":
            task = make_within_period_task(g, ratio=m.split_ratio,
                                           neg_ratio=m.neg_ratio, seed=seed)
        else:
            task = make_cross_period_task(g_short, g_long,
                                          neg_ratio=m.neg_ratio, seed=seed)
        q = two_hop_connector_counts(task.train)
        pairs, labels = task_candidates(task)
        for name in m.methods:
            res = _score_with(task.train, q, m.params, name, pairs, m.n_jobs)
            values = res.score if name == "h3" else res
            report = evaluate_scores(pairs, values, labels, k=k, seed=seed)
            row = {"task": m.task, "method": name,
                   "negatives_truncated": task.negatives_truncated}
            row.update({f: getattr(report, f) for f in METRIC_COLUMNS})
            records.append(row)
    return records


def _cmd_evaluate(m: RunManifest) -> None:
    records = _evaluate_records(m)
    fields = ["task", "method", "negatives_truncated", *METRIC_COLUMNS]
    write_report(records, m.output, m.fmt, fieldnames=fields)


def _cmd_sweep(m: RunManifest) -> None:
    g = _load_graph(m.input, m.lenient)
    records = run_sensitivity_sweep(
        g, m.seeds, split_ratio=m.split_ratio, neg_ratio=m.neg_ratio,
        k=_metrics_k(m), n_jobs=m.n_jobs, network=Path(m.input).stem)
    fields = list(records[0].keys()) if records else None
    write_report(records, m.output, m.fmt, fieldnames=fields)


def _cmd_explain(m: RunManifest) -> None:
    g = _load_graph(m.input, m.lenient)
    q = two_hop_connector_counts(g)
    records = []
    for id_i, id_j in m.pairs:
        try:
            i, j = g.index_of(id_i), g.index_of(id_j)
        except KeyError as exc:
            raise DataError(str(exc)) from exc
        forward, reverse = explain_pair(g, q, m.params, i, j)
        for direction, evidence in (("forward", forward), ("reverse", reverse)):
            for ev in evidence:
                records.append({
                    "i": id_i, "j": id_j, "direction": direction,
                    "k": g.id_of(ev.k), "l": g.id_of(ev.l),
                    "w_ik": ev.w_ik, "w_kl": ev.w_kl, "w_lj": ev.w_lj,
                    "numerator": ev.numerator, "n_k": ev.n_k, "n_l": ev.n_l,
                    "n_j": ev.n_j, "q": ev.q, "penalty": ev.penalty,
                    "contribution": ev.contribution,
                })
    write_report(records, m.output, m.fmt, fieldnames=EXPLAIN_COLUMNS)


_HANDLERS = {
    "ingest": _cmd_ingest,
    "score": _cmd_score,
    "evaluate": _cmd_evaluate,
    "sweep": _cmd_sweep,
    "explain": _cmd_explain,
}


def _emit_error(kind: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")


def run_pipeline(manifest: RunManifest) -> int:
    """Execute one manifest; returns the process exit code."""
    try:
        manifest.validate()
    except ValueError as exc:
        _emit_error("usage", str(exc))
        return EXIT_USAGE
    try:
        _HANDLERS[manifest.command](manifest)
        return EXIT_OK
    except DegenerateTaskError as exc:
        _emit_error("degenerate_task", str(exc))
        return EXIT_DEGENERATE
    except (DataError, OSError) as exc:
        _emit_error("data", str(exc))
        return EXIT_DATA
    except (ValueError, KeyError, IndexError, StaleCountsError) as exc:
        _emit_error("usage", str(exc))
        return EXIT_USAGE


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on usage errors, not argparse's 2
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parse_seeds(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(s.strip()) for s in text.split(",") if s.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad seed list {text!r}")


def _parse_pair(text: str) -> tuple[str, str]:
    if ":" not in text:
        raise argparse.ArgumentTypeError(
            f"pair {text!r} must look like SOURCE:TARGET")
    a, _, b = text.partition(":")
    if not a or not b:
        raise argparse.ArgumentTypeError(f"pair {text!r} has an empty side")
    return a, b


def _parse_methods(text: str) -> tuple[str, ...]:
    names = [s.strip().lower() for s in text.split(",") if s.strip()]
    return tuple(dict.fromkeys(names))  # dedupe, keep order


def _add_common(sub: argparse.ArgumentParser, with_params: bool = True) -> None:
    sub.add_argument("--output", "-o", default="report.csv",
                     help="output report path")
    sub.add_argument("--format", dest="fmt", choices=("csv", "jsonl"),
                     default="csv", help="output format")
    sub.add_argument("--lenient", action="store_true",
                     help="drop malformed edge rows instead of aborting")
    sub.add_argument("--threads", dest="n_jobs", type=int, default=1,
                     help="worker count for scoring (results identical)")
    sub.add_argument("--config", help="flat key=value config file")
    if with_params:
        for key in _PARAM_KEYS:
            sub.add_argument(f"--{key.replace('_', '-')}", dest=key,
                             type=float, default=None,
                             help=f"H3 parameter {key} (overrides config)")


def _build_parser() -> _Parser:
    parser = _Parser(prog="hoplink",
                     description="Weighted three-hop link prediction toolkit")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("ingest", parents=[], help="validate an edge list")
    p.add_argument("--input", "-i", required=True)
    _add_common(p, with_params=False)

    p = commands.add_parser("score", help="rank unlinked two-hop pairs")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--methods", type=_parse_methods, default=("h3",),
                   help="comma list of scorers (h3,cn,ra,pa,jaccard,aa,hp,lhn,l3)")
    p.add_argument("--top-k", dest="top_k", type=int, default=None,
                   help="emit only the top-k ranked pairs")
    _add_common(p)

    p = commands.add_parser("evaluate", help="run task A or B over seeds")
    p.add_argument("--task", choices=("a", "b"), default="a")
    p.add_argument("--input", "-i", help="edge list for task A")
    p.add_argument("--short", help="short-window edge list for task B")
    p.add_argument("--long", help="long-window edge list for task B")
    p.add_argument("--methods", type=_parse_methods, default=METHODS,
                   help="comma list of methods (default: all)")
    p.add_argument("--seeds", type=_parse_seeds, default=None,
                   help="comma list of seeds")
    p.add_argument("--split-ratio", dest="split_ratio", type=float, default=None)
    p.add_argument("--neg-ratio", dest="neg_ratio", type=int, default=None)
    p.add_argument("--top-k", dest="top_k", type=int, default=None,
                   help="metric cutoff k (default 100)")
    _add_common(p)

    p = commands.add_parser("sweep", help="run the 17-config sensitivity grid")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--seeds", type=_parse_seeds, default=None)
    p.add_argument("--split-ratio", dest="split_ratio", type=float, default=None)
    p.add_argument("--neg-ratio", dest="neg_ratio", type=int, default=None)
    p.add_argument("--top-k", dest="top_k", type=int, default=None)
    _add_common(p, with_params=False)

    p = commands.add_parser("explain", help="decompose pairs into paths")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--pair", dest="pairs", action="append", type=_parse_pair,
                   default=[], help="SOURCE:TARGET pair (repeatable)")
    _add_common(p)

    return parser


def build_manifest(args: argparse.Namespace) -> RunManifest:
    """Merge defaults, config-file values, and CLI flags (flags win)."""
    config = read_config(args.config) if getattr(args, "config", None) else {}

    def resolve(key, default):
        flag = getattr(args, key, None)
        if flag is not None:
            return flag
        if key in config:
            return config[key]
        return default

    param_values = {key: resolve(key, getattr(H3Params, key)) for key in _PARAM_KEYS}
    params = H3Params(**param_values)
    seeds = resolve("seeds", (1,))
    return RunManifest(
        command=args.command,
        input=getattr(args, "input", None),
        short=getattr(args, "short", None),
        long=getattr(args, "long", None),
        output=args.output,
        fmt=args.fmt,
        lenient=args.lenient,
        task=getattr(args, "task", "a"),
        methods=tuple(getattr(args, "methods", ("h3",))),
        seeds=tuple(int(s) for s in seeds),
        pairs=tuple(getattr(args, "pairs", ()) or ()),
        split_ratio=float(resolve("split_ratio", 0.5)),
        neg_ratio=int(resolve("neg_ratio", 20)),
        top_k=resolve("top_k", None),
        n_jobs=args.n_jobs,
        params=params,
    )


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        manifest = build_manifest(args)
    except DataError as exc:
        _emit_error("data", str(exc))
        return EXIT_DATA
    except ValueError as exc:
        _emit_error("usage", str(exc))
        return EXIT_USAGE
    return run_pipeline(manifest)


if __name__ == "__main__":
    sys.exit(main())
