"""Classical structural similarity indices used as comparators: seven
two-hop heuristics plus the unweighted three-hop L3 index.

All of these operate on the binary adjacency structure and unweighted
degrees; link weights play no role here.
"""

from __future__ import annotations

import logging
from enum import Enum

import numpy as np

from ._sparse import product_pair_entries, scale_cols, scale_rows
from .graph import WeightedGraph

logger = logging.getLogger(__name__)

_CHUNK = 1 << 18


class BaselineMethod(Enum):
    CN = "cn"
    RA = "ra"
    PA = "pa"
    JACCARD = "jaccard"
    AA = "aa"
    HP = "hp"
    LHN = "lhn"
    L3 = "l3"


def _common_neighbors(g: WeightedGraph, i: int, j: int) -> np.ndarray:
    nbrs_i, _ = g.neighbors(i)
    nbrs_j, _ = g.neighbors(j)
    return np.intersect1d(nbrs_i, nbrs_j, assume_unique=True)


def two_hop_index(g: WeightedGraph, method: BaselineMethod, i: int, j: int) -> float:
    """Score one pair with a two-hop heuristic (any method except L3).

    CN counts shared neighbors; RA and AA down-weight them by 1/d and
    1/log(d); PA multiplies endpoint degrees; Jaccard, HP and LHN normalize
    the overlap by union size, min degree and degree product. Ratio indices
    return 0 when their denominator vanishes (both endpoints isolated).
    """
    if method == BaselineMethod.L3:
        raise ValueError("L3 is a three-hop index; use l3_score")
    if i == j:
        raise ValueError("cannot score a node against itself")
    d_i, d_j = g.degree(i), g.degree(j)
    if method == BaselineMethod.PA:
        return float(d_i * d_j)
    common = _common_neighbors(g, i, j)
    cn = common.shape[0]
    if method == BaselineMethod.CN:
        return float(cn)
    if method == BaselineMethod.RA:
        return float(np.sum(1.0 / g.deg[common])) if cn else 0.0
    if method == BaselineMethod.AA:
        d_k = g.deg[common]
        usable = d_k >= 2
        skipped = cn - int(usable.sum())
        if skipped:
            # cannot happen in a simple graph (a shared neighbor has degree
            # >= 2); kept as a guard against hand-built adjacency
            logger.warning("AA skipped %d degree-1 shared neighbor(s)", skipped)
        return float(np.sum(1.0 / np.log(d_k[usable]))) if usable.any() else 0.0
    if method == BaselineMethod.JACCARD:
        union = d_i + d_j - cn
        return float(cn / union) if union else 0.0
    if method == BaselineMethod.HP:
        m = min(d_i, d_j)
        return float(cn / m) if m else 0.0
    if method == BaselineMethod.LHN:
        prod = d_i * d_j
        return float(cn / prod) if prod else 0.0
    raise ValueError(f"unknown method {method!r}")


def l3_score(g: WeightedGraph, i: int, j: int) -> float:
    """Three-hop L3 score: paths i -> k -> l -> j counted on the binary
    adjacency, each normalized by sqrt(d_k * d_l)."""
    if i == j:
        raise ValueError("cannot score a node against itself")
    nbrs_i, _ = g.neighbors(i)
    nbrs_j, _ = g.neighbors(j)
    deg = g.deg
    total = 0.0
    for k in nbrs_i:
        common = np.intersect1d(g.neighbors(int(k))[0], nbrs_j, assume_unique=True)
        if common.shape[0] == 0:
            continue
        total += float(np.sum(1.0 / np.sqrt(float(deg[k]) * deg[common])))
    return total


def _chunked(m: int):
    for lo in range(0, m, _CHUNK):
        yield lo, min(lo + _CHUNK, m)


def score_candidates(g: WeightedGraph, method: BaselineMethod, candidates,
                     n_jobs: int = 1) -> np.ndarray:
    """Vectorized scoring of an (m, 2) pair array with one baseline method.

    Unlike the H3 pipeline this accepts arbitrary distinct pairs, edges
    included, so generalization experiments can score everything.
    """
    cand = np.asarray(candidates, dtype=np.int64).reshape(-1, 2)
    m = cand.shape[0]
    if m == 0:
        return np.zeros(0, dtype=np.float64)
    if cand.min() < 0 or cand.max() >= g.node_count:
        raise IndexError("candidate node index out of range")
    if np.any(cand[:, 0] == cand[:, 1]):
        raise ValueError("candidate pairs must join two distinct nodes")
    src, dst = cand[:, 0], cand[:, 1]
    deg = g.deg.astype(np.float64)

    if method == BaselineMethod.PA:
        return deg[src] * deg[dst]

    if method == BaselineMethod.L3:
        a = g.binary_csr(dtype=np.float64)
        inv_sqrt = 1.0 / np.sqrt(np.maximum(deg, 1.0))
        inner = scale_cols(scale_rows(a, inv_sqrt), inv_sqrt) @ a
        return product_pair_entries(a, inner, src, dst, n_jobs=n_jobs)

    a = g.binary_csr(dtype=np.float64)
    if method == BaselineMethod.RA:
        weights = np.zeros_like(deg)
        nz = deg > 0
        weights[nz] = 1.0 / deg[nz]
        right = scale_cols(a, weights)
    elif method == BaselineMethod.AA:
        # degree-1 nodes get weight 0: they cannot be shared neighbors in a
        # simple graph, and 1/log(1) would blow up
        weights = np.zeros_like(deg)
        ok = deg >= 2
        weights[ok] = 1.0 / np.log(deg[ok])
        right = scale_cols(a, weights)
    else:
        right = a

    out = np.empty(m, dtype=np.float64)
    for lo, hi in _chunked(m):
        rows = a[src[lo:hi]]
        cols = right[dst[lo:hi]]
        out[lo:hi] = np.asarray(rows.multiply(cols).sum(axis=1)).reshape(-1)

    if method in (BaselineMethod.CN, BaselineMethod.RA, BaselineMethod.AA):
        return out
    cn = out
    if method == BaselineMethod.JACCARD:
        union = deg[src] + deg[dst] - cn
        return np.divide(cn, union, out=np.zeros_like(cn), where=union > 0)
    if method == BaselineMethod.HP:
        dmin = np.minimum(deg[src], deg[dst])
        return np.divide(cn, dmin, out=np.zeros_like(cn), where=dmin > 0)
    if method == BaselineMethod.LHN:
        prod = deg[src] * deg[dst]
        return np.divide(cn, prod, out=np.zeros_like(cn), where=prod > 0)
    raise ValueError(f"unknown method {method!r}")
