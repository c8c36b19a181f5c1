"""Edge-list ingestion, flat config files, and report emission."""

from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import asdict, is_dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import DataError

logger = logging.getLogger(__name__)

CONFIG_KEYS = {
    "alpha", "beta", "gamma", "eta", "p_min", "epsilon",
    "split_ratio", "neg_ratio", "top_k", "seeds",
}


def _parse_weight(text: str) -> float | None:
    try:
        return float(text)
    except ValueError:
        return None


def parse_edge_list(path, lenient: bool = False) -> list[tuple[str, str, float]]:
    """Read (source, target, weight) rows from a delimited text file.

    The delimiter (comma or tab) is sniffed from the first non-empty line;
    a header is skipped when its third field is non-numeric. Two-column rows
    default the weight to 1.0; extra trailing columns are ignored. Rows that
    fail to parse (missing fields, unparseable / negative / non-finite
    weight) abort the run unless ``lenient`` is set, in which case they are
    dropped with a logged count.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataError(f"cannot read edge list {path}: {exc}") from exc

    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise DataError(f"edge list {path} is empty")
    first = lines[0]
    has_comma = "," in first
    has_tab = "\t" in first
    if has_comma and has_tab:
        raise DataError(f"ambiguous delimiter in {path}: first line mixes commas and tabs")
    if not has_comma and not has_tab:
        raise DataError(f"cannot detect delimiter in {path}: expected comma or tab")
    delimiter = "," if has_comma else "\t"

    rows = list(csv.reader(lines, delimiter=delimiter))
    start = 0
    if len(rows[0]) >= 3 and _parse_weight(rows[0][2].strip()) is None:
        start = 1

    edges: list[tuple[str, str, float]] = []
    malformed: list[tuple[int, str]] = []
    for lineno, row in enumerate(rows[start:], start=start + 1):
        fields = [f.strip() for f in row]
        if len(fields) < 2 or not fields[0] or not fields[1]:
            malformed.append((lineno, "missing source or target"))
            continue
        if len(fields) == 2:
            weight = 1.0
        else:
            parsed = _parse_weight(fields[2])
            if parsed is None:
                malformed.append((lineno, f"unparseable weight {fields[2]!r}"))
                continue
            if not math.isfinite(parsed):
                malformed.append((lineno, "non-finite weight"))
                continue
            if parsed < 0:
                malformed.append((lineno, f"negative weight {parsed}"))
                continue
            weight = parsed
        edges.append((fields[0], fields[1], weight))

    if malformed:
        preview = "; ".join(f"line {ln}: {why}" for ln, why in malformed[:5])
        if not lenient:
            raise DataError(
                f"{len(malformed)} malformed row(s) in {path} ({preview})")
        logger.warning("dropped %d malformed row(s) in %s (%s)",
                       len(malformed), path, preview)
    if not edges:
        raise DataError(f"no valid rows in {path}")
    return edges


def read_config(path) -> dict:
    """Read a flat ``key = value`` config file ('#' starts a comment).

    Recognized keys mirror the scoring parameters plus task settings;
    ``seeds`` is a comma-separated integer list, ``top_k`` and ``neg_ratio``
    integers, everything else a float.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataError(f"cannot read config {path}: {exc}") from exc
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DataError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in CONFIG_KEYS:
            raise DataError(f"{path}:{lineno}: unknown config key {key!r}")
        try:
            if key == "seeds":
                out[key] = tuple(int(s.strip()) for s in value.split(",") if s.strip())
            elif key in ("top_k", "neg_ratio"):
                out[key] = int(value)
            else:
                out[key] = float(value)
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
    return out


def _normalize_records(records: Iterable) -> list[dict]:
    out = []
    for rec in records:
        if is_dataclass(rec):
            rec = asdict(rec)
        elif not isinstance(rec, dict):
            raise ValueError("records must be dicts or dataclasses")
        out.append(rec)
    if out:
        keys = list(out[0].keys())
        for rec in out[1:]:
            if list(rec.keys()) != keys:
                raise ValueError("records are not homogeneous")
    return out


def _format_csv_value(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def write_report(records: Iterable, path, fmt: str = "csv",
                 fieldnames: Sequence[str] | None = None) -> None:
    """Write homogeneous records as CSV (fixed column order, 6-significant-
    digit reals) or JSON lines (full precision).

    ``fieldnames`` supplies the header when the record list may be empty.
    """
    rows = _normalize_records(records)
    if rows and fieldnames is not None and list(rows[0].keys()) != list(fieldnames):
        raise ValueError("fieldnames do not match record keys")
    if not rows and fieldnames is None and fmt == "csv":
        raise ValueError("empty record list needs explicit fieldnames for CSV")
    path = Path(path)
    if fmt == "csv":
        header = list(rows[0].keys()) if rows else list(fieldnames)
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for rec in rows:
                writer.writerow([_format_csv_value(rec[k]) for k in header])
    elif fmt == "jsonl":
        with path.open("w") as fh:
            for rec in rows:
                fh.write(json.dumps(rec) + "\n")
    else:
        raise ValueError(f"unknown report format {fmt!r} (use 'csv' or 'jsonl')")


def read_report_jsonl(path) -> list[dict]:
    """Parse a JSON-lines report back into records."""
    out = []
    with Path(path).open() as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(json.loads(line))
    return out
