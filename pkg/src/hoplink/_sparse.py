"""Blocked sparse-product helpers shared by the scorers.

The score matrices used here have far more structural nonzeros than fit in
memory at national scale, so products are never materialized whole: callers
ask for specific (row, col) entries and the product is evaluated row-block by
row-block, with block boundaries derived from the exact per-row flop cost.
Results are bit-identical for any worker count because blocking does not
depend on ``n_jobs`` and each entry is produced by exactly one block.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from joblib import Parallel, delayed


def scale_rows(m: sp.csr_array, v: np.ndarray) -> sp.csr_array:
    """Return a copy of ``m`` with row i multiplied by ``v[i]``."""
    out = m.copy()
    out.data = out.data * np.repeat(v, np.diff(out.indptr))
    return out


def scale_cols(m: sp.csr_array, v: np.ndarray) -> sp.csr_array:
    """Return a copy of ``m`` with column j multiplied by ``v[j]``."""
    out = m.copy()
    out.data = out.data * v[out.indices]
    return out


def _block_values(left_rows: sp.csr_array, row_ids: np.ndarray,
                  right: sp.csr_array, q_rows: np.ndarray,
                  q_cols: np.ndarray, ncols: int) -> np.ndarray:
    prod = left_rows @ right
    prod.sort_indices()
    counts = np.diff(prod.indptr)
    keys = np.repeat(row_ids, counts) * np.int64(ncols) + prod.indices.astype(np.int64)
    qkeys = q_rows * np.int64(ncols) + q_cols
    if keys.shape[0] == 0:
        return np.zeros(qkeys.shape[0], dtype=np.float64)
    pos = np.searchsorted(keys, qkeys)
    pos_c = np.minimum(pos, keys.shape[0] - 1)
    hit = keys[pos_c] == qkeys
    return np.where(hit, prod.data[pos_c], 0.0)


def product_pair_entries(left: sp.csr_array, right: sp.csr_array,
                         rows: np.ndarray, cols: np.ndarray,
                         target_block_cost: int = 8_000_000,
                         n_jobs: int = 1) -> np.ndarray:
    """Entries of ``left @ right`` at the given (row, col) positions.

    Positions outside the product's support yield 0.0. Only rows that are
    actually queried are multiplied out.
    """
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    if rows.shape[0] == 0:
        return np.zeros(0, dtype=np.float64)
    ncols = right.shape[1]
    order = np.lexsort((cols, rows))
    r_s, c_s = rows[order], cols[order]
    needed = np.unique(r_s)

    # exact upper bound on product nnz per needed row: sum of right-row sizes
    # over the row's left-neighbors
    pattern = left[needed]
    pattern = sp.csr_array(
        (np.ones(pattern.indices.shape[0]), pattern.indices, pattern.indptr),
        shape=pattern.shape,
    )
    cost = pattern @ np.diff(right.indptr).astype(np.float64)

    bounds = [0]
    acc = 0.0
    for t in range(needed.shape[0]):
        acc += cost[t]
        if acc >= target_block_cost and t + 1 > bounds[-1]:
            bounds.append(t + 1)
            acc = 0.0
    if bounds[-1] != needed.shape[0]:
        bounds.append(needed.shape[0])

    tasks = []
    for b0, b1 in zip(bounds[:-1], bounds[1:]):
        block_rows = needed[b0:b1]
        q0 = np.searchsorted(r_s, block_rows[0])
        q1 = np.searchsorted(r_s, block_rows[-1], side="right")
        tasks.append((block_rows, q0, q1))

    def run(block_rows, q0, q1):
        return _block_values(left[block_rows], block_rows, right,
                             r_s[q0:q1], c_s[q0:q1], ncols)

    if n_jobs == 1 or len(tasks) == 1:
        parts = [run(*t) for t in tasks]
    else:
        parts = Parallel(n_jobs=n_jobs)(delayed(run)(*t) for t in tasks)

    out = np.empty(rows.shape[0], dtype=np.float64)
    out[order] = np.concatenate(parts)
    return out
