"""Small construction helpers shared across the test modules."""

import numpy as np

import hoplink as hl


def mk_graph(edges, nodes=None):
    """Build a graph from (label, label, weight) triples with int labels."""
    return hl.build_graph([(str(a), str(b), float(w)) for a, b, w in edges],
                          nodes=None if nodes is None else [str(x) for x in nodes])


def mk_unweighted(pairs, nodes=None):
    return mk_graph([(a, b, 1.0) for a, b in pairs], nodes=nodes)


def random_unweighted(n, avg_degree, seed):
    """Random simple graph with every weight exactly 1."""
    g = hl.random_weighted_graph(n, avg_degree, seed)
    e = g.edge_array()
    return hl.from_index_edges(g.node_count, e[:, 0], e[:, 1],
                               np.ones(e.shape[0]))


def ix(g, *labels):
    """Indices of the given integer/str labels."""
    out = tuple(g.index_of(str(x)) for x in labels)
    return out[0] if len(out) == 1 else out


def pair_set(g, pairs_array):
    """Canonical {(label, label)} set from an (m, 2) index array."""
    out = set()
    for i, j in np.asarray(pairs_array).reshape(-1, 2):
        a, b = g.id_of(int(i)), g.id_of(int(j))
        out.add(tuple(sorted((a, b))))
    return out


def edge_list_of(g):
    """[(label, label, w)] with canonical label order."""
    return sorted((min(a, b), max(a, b), w) for a, b, w in g.iter_edges())
