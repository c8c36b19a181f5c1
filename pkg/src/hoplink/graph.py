"""Immutable undirected weighted graph in CSR layout, plus the two-hop
structural precomputations that every scorer builds on."""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import DataError

logger = logging.getLogger(__name__)


def _pair_keys(rows: np.ndarray, cols: np.ndarray, n: int) -> np.ndarray:
    """Flat int64 key ``row * n + col`` for vectorized pair set operations."""
    return rows.astype(np.int64) * np.int64(n) + cols.astype(np.int64)


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected weighted graph, frozen after construction.

    Nodes carry opaque external string ids; all computation runs on dense
    integer indices assigned by sorted id. The adjacency is stored once in
    CSR form (``indptr``, ``indices``, ``weights``) with neighbor lists
    sorted by index, no self-loops, no zero weights, and every edge present
    in both directions with the same weight.
    """

    node_ids: tuple[str, ...]
    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray
    deg_w: np.ndarray
    deg: np.ndarray
    fingerprint: str

    @property
    def node_count(self) -> int:
        return len(self.node_ids)

    @property
    def edge_count(self) -> int:
        return self.indices.shape[0] // 2

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum()) / 2.0

    @cached_property
    def _id_to_index(self) -> dict[str, int]:
        return {nid: i for i, nid in enumerate(self.node_ids)}

    def index_of(self, node_id) -> int:
        try:
            return self._id_to_index[str(node_id)]
        except KeyError:
            raise KeyError(f"unknown node id {node_id!r}") from None

    def id_of(self, v: int) -> str:
        return self.node_ids[v]

    def _check_index(self, v: int) -> None:
        if not 0 <= v < self.node_count:
            raise IndexError(f"node index {v} out of range [0, {self.node_count})")

    def neighbors(self, v: int) -> tuple[np.ndarray, np.ndarray]:
        """Neighbor indices (sorted) and matching weights of node ``v``."""
        self._check_index(v)
        lo, hi = self.indptr[v], self.indptr[v + 1]
        return self.indices[lo:hi], self.weights[lo:hi]

    def weighted_degree(self, v: int) -> float:
        self._check_index(v)
        return float(self.deg_w[v])

    def degree(self, v: int) -> int:
        self._check_index(v)
        return int(self.deg[v])

    def has_edge(self, i: int, j: int) -> bool:
        self._check_index(i)
        self._check_index(j)
        nbrs = self.indices[self.indptr[i]:self.indptr[i + 1]]
        pos = np.searchsorted(nbrs, j)
        return pos < nbrs.shape[0] and nbrs[pos] == j

    def edge_weight(self, i: int, j: int) -> float:
        """Weight of edge (i, j), or 0.0 when absent."""
        self._check_index(i)
        self._check_index(j)
        lo, hi = self.indptr[i], self.indptr[i + 1]
        pos = lo + np.searchsorted(self.indices[lo:hi], j)
        if pos < hi and self.indices[pos] == j:
            return float(self.weights[pos])
        return 0.0

    @cached_property
    def _edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Unordered edges as an (m, 2) array with i < j, plus weights."""
        n = self.node_count
        rows = np.repeat(np.arange(n, dtype=np.int64), np.diff(self.indptr))
        upper = rows < self.indices
        pairs = np.column_stack([rows[upper], self.indices[upper]])
        return pairs, self.weights[upper].copy()

    def edge_array(self) -> np.ndarray:
        return self._edge_arrays[0]

    def edge_weight_array(self) -> np.ndarray:
        return self._edge_arrays[1]

    @cached_property
    def edge_keys(self) -> np.ndarray:
        """Sorted flat keys of the (i < j) edge set."""
        pairs = self.edge_array()
        return _pair_keys(pairs[:, 0], pairs[:, 1], self.node_count)

    def to_csr(self) -> sp.csr_array:
        """Weighted adjacency as a scipy CSR array (shares no state)."""
        n = self.node_count
        return sp.csr_array(
            (self.weights.copy(), self.indices.copy(), self.indptr.copy()),
            shape=(n, n),
        )

    def binary_csr(self, dtype=np.int64) -> sp.csr_array:
        """Binary adjacency view: entry 1 wherever an edge exists."""
        n = self.node_count
        return sp.csr_array(
            (np.ones(self.indices.shape[0], dtype=dtype), self.indices.copy(),
             self.indptr.copy()),
            shape=(n, n),
        )

    def iter_edges(self) -> Iterator[tuple[str, str, float]]:
        """Yield undirected edges as (id_i, id_j, weight) with index i < j."""
        pairs, w = self._edge_arrays
        for (i, j), wij in zip(pairs, w):
            yield self.node_ids[i], self.node_ids[j], float(wij)


def _finalize(n: int, node_ids: tuple[str, ...], lo: np.ndarray, hi: np.ndarray,
              w: np.ndarray) -> WeightedGraph:
    """Assemble the CSR graph from deduplicated (lo < hi) edge arrays."""
    rows = np.concatenate([lo, hi])
    cols = np.concatenate([hi, lo])
    data = np.concatenate([w, w])
    adj = sp.coo_array((data, (rows, cols)), shape=(n, n)).tocsr()
    adj.sort_indices()
    indptr = adj.indptr.astype(np.int64)
    indices = adj.indices.astype(np.int64)
    weights = adj.data.astype(np.float64)
    deg_w = np.asarray(adj.sum(axis=1), dtype=np.float64).reshape(-1)
    deg = np.diff(indptr)
    for arr in (indptr, indices, weights, deg_w, deg):
        arr.setflags(write=False)
    h = hashlib.blake2b(digest_size=16)
    h.update(np.int64(n).tobytes())
    h.update(indptr.tobytes())
    h.update(indices.tobytes())
    h.update(weights.tobytes())
    return WeightedGraph(
        node_ids=node_ids,
        indptr=indptr,
        indices=indices,
        weights=weights,
        deg_w=deg_w,
        deg=deg,
        fingerprint=h.hexdigest(),
    )


def from_index_edges(n: int, src: np.ndarray, dst: np.ndarray, w: np.ndarray,
                     node_ids: Sequence[str] | None = None) -> WeightedGraph:
    """Build a graph from integer-indexed edge arrays.

    Same cleanup rules as :func:`build_graph`: duplicate undirected edges are
    merged by summing weights, self-loops and zero-weight edges are dropped,
    negative or non-finite weights are rejected. Node ids default to the
    decimal index strings.
    """
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    w = np.asarray(w, dtype=np.float64)
    if not (src.shape == dst.shape == w.shape):
        raise DataError("edge arrays must have identical length")
    if src.size and (src.min() < 0 or dst.min() < 0
                     or max(src.max(), dst.max()) >= n):
        raise DataError("edge endpoint index out of range")
    bad = ~np.isfinite(w)
    if bad.any():
        k = int(np.flatnonzero(bad)[0])
        raise DataError(f"non-finite weight on edge ({src[k]}, {dst[k]})")
    bad = w < 0
    if bad.any():
        k = int(np.flatnonzero(bad)[0])
        raise DataError(
            f"negative weight {w[k]} on edge ({src[k]}, {dst[k]})")

    loops = src == dst
    n_loops = int(loops.sum())
    if n_loops:
        logger.warning("dropping %d self-loop edge(s)", n_loops)
    keep = ~loops & (w > 0)
    lo = np.minimum(src[keep], dst[keep])
    hi = np.maximum(src[keep], dst[keep])
    wk = w[keep]
    if lo.size:
        keys = _pair_keys(lo, hi, n)
        uniq, inverse = np.unique(keys, return_inverse=True)
        merged_w = np.bincount(inverse, weights=wk, minlength=uniq.shape[0])
        lo = (uniq // n).astype(np.int64)
        hi = (uniq % n).astype(np.int64)
        wk = merged_w
    if node_ids is None:
        node_ids = tuple(str(i) for i in range(n))
    else:
        node_ids = tuple(str(x) for x in node_ids)
        if len(node_ids) != n:
            raise DataError("node_ids length does not match node count")
    return _finalize(n, node_ids, lo, hi, wk)


def build_graph(edges: Iterable[tuple], nodes: Iterable | None = None) -> WeightedGraph:
    """Build an immutable weighted graph from (source, target, weight) triples.

    Node ids are treated as opaque strings (non-strings pass through
    ``str()``) and interned to dense indices in sorted-id order, so any
    permutation of the input yields an identical graph. Duplicate undirected
    edges merge by summing weights; self-loops and zero-weight edges are
    dropped (their endpoints still become nodes). ``nodes`` may list extra
    ids to include in the node universe.

    Raises :class:`DataError` on negative or non-finite weights.
    """
    us: list[str] = []
    vs: list[str] = []
    ws: list[float] = []
    for edge in edges:
        try:
            u, v, w = edge
        except (TypeError, ValueError):
            raise DataError(f"edge {edge!r} is not a (source, target, weight) triple")
        us.append(str(u))
        vs.append(str(v))
        ws.append(float(w))

    id_pool: set[str] = set(us) | set(vs)
    if nodes is not None:
        id_pool.update(str(x) for x in nodes)
    ordered = tuple(sorted(id_pool))
    lookup = {nid: i for i, nid in enumerate(ordered)}
    n = len(ordered)

    src = np.fromiter((lookup[u] for u in us), dtype=np.int64, count=len(us))
    dst = np.fromiter((lookup[v] for v in vs), dtype=np.int64, count=len(vs))
    w_arr = np.asarray(ws, dtype=np.float64)
    bad = ~np.isfinite(w_arr)
    if bad.any():
        k = int(np.flatnonzero(bad)[0])
        raise DataError(f"non-finite weight on edge ({us[k]!r}, {vs[k]!r})")
    bad = w_arr < 0
    if bad.any():
        k = int(np.flatnonzero(bad)[0])
        raise DataError(
            f"negative weight {w_arr[k]} on edge ({us[k]!r}, {vs[k]!r})")
    return from_index_edges(n, src, dst, w_arr, node_ids=ordered)


def weighted_degree(g: WeightedGraph, v: int) -> float:
    """Sum of weights incident to node ``v``; 0 for an isolated node."""
    return g.weighted_degree(v)


@dataclass(frozen=True)
class TwoHopConnectorCounts:
    """Sparse (k, j) -> number of distinct length-2 connectors between k and j.

    Equals the squared binary adjacency restricted to its nonzero support;
    symmetric, diagonal entries present (value = degree of k) but never
    consulted when scoring non-edge candidates.
    """

    matrix: sp.csr_array
    graph_fingerprint: str

    @property
    def nnz(self) -> int:
        return int(self.matrix.nnz)

    def get(self, k: int, j: int) -> int:
        """Connector count for (k, j); 0 when no two-hop path exists."""
        m = self.matrix
        lo, hi = m.indptr[k], m.indptr[k + 1]
        pos = lo + np.searchsorted(m.indices[lo:hi], j)
        if pos < hi and m.indices[pos] == j:
            return int(m.data[pos])
        return 0

    def items(self) -> Iterator[tuple[tuple[int, int], int]]:
        """Iterate stored ((k, j), count) entries; intended for small graphs."""
        m = self.matrix.tocoo()
        for k, j, q in zip(m.row, m.col, m.data):
            yield (int(k), int(j)), int(q)


def two_hop_connector_counts(g: WeightedGraph) -> TwoHopConnectorCounts:
    """Count distinct two-hop connectors for every ordered node pair.

    Computed as the sparse square of the binary adjacency, so memory tracks
    the nonzero count of the product rather than n^2.
    """
    a = g.binary_csr(dtype=np.int64)
    b = a @ a
    b.sort_indices()
    return TwoHopConnectorCounts(matrix=b, graph_fingerprint=g.fingerprint)


def candidate_pairs_within_two_hops(
    g: WeightedGraph,
    q_counts: TwoHopConnectorCounts | None = None,
) -> np.ndarray:
    """All unordered non-adjacent pairs sharing at least one common neighbor.

    Returns an (m, 2) int64 array with i < j per row, sorted
    lexicographically: the support of the two-hop connector counts minus the
    edge set minus the diagonal. Pass precomputed ``q_counts`` to avoid
    squaring the adjacency twice.
    """
    if q_counts is None:
        q_counts = two_hop_connector_counts(g)
    elif q_counts.graph_fingerprint != g.fingerprint:
        raise DataError("connector counts were built from a different graph")
    n = g.node_count
    coo = q_counts.matrix.tocoo()
    upper = coo.row < coo.col
    rows = coo.row[upper].astype(np.int64)
    cols = coo.col[upper].astype(np.int64)
    keys = _pair_keys(rows, cols, n)
    order = np.argsort(keys, kind="stable")
    keys, rows, cols = keys[order], rows[order], cols[order]
    edge_keys = g.edge_keys
    if edge_keys.shape[0] == 0:
        return np.column_stack([rows, cols])
    pos = np.minimum(np.searchsorted(edge_keys, keys), edge_keys.shape[0] - 1)
    keep = edge_keys[pos] != keys
    return np.column_stack([rows[keep], cols[keep]])
