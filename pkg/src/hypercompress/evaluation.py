"""Partition agreement scores and clique projections."""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

import numpy as np

from .hypergraph import Hypergraph
from .state import Clustering


def _labels(c: Clustering | Sequence) -> list:
    return list(c.labels) if isinstance(c, Clustering) else list(c)


def contingency_table(truth, predicted) -> tuple[np.ndarray, list, list]:
    """Counts ``n_ab`` of vertices with truth label ``a`` and predicted ``b``.

    Returns the table together with the row and column label orders (first
    appearance).
    """
    t = _labels(truth)
    p = _labels(predicted)
    if len(t) != len(p):
        raise ValueError(f"partitions have different lengths ({len(t)} vs {len(p)})")
    rows = list(dict.fromkeys(t))
    cols = list(dict.fromkeys(p))
    ri = {a: i for i, a in enumerate(rows)}
    ci = {b: j for j, b in enumerate(cols)}
    table = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for a, b in zip(t, p):
        table[ri[a], ci[b]] += 1
    return table, rows, cols


def _pairs(x: np.ndarray) -> int:
    x = x.astype(object)
    return int(sum(v * (v - 1) // 2 for v in x.ravel()))


def adjusted_rand_index(truth, predicted) -> float:
    """Adjusted Rand index of two labelings of the same vertices.

    Computed in exact integer arithmetic.  When the chance-corrected
    denominator vanishes, returns 1.0 if the partitions coincide up to
    relabeling and 0.0 otherwise.
    """
    table, _, _ = contingency_table(truth, predicted)
    n = int(table.sum())
    index = _pairs(table)
    sum_a = _pairs(table.sum(axis=1))
    sum_b = _pairs(table.sum(axis=0))
    total = n * (n - 1) // 2
    numer = 2 * (total * index - sum_a * sum_b)
    denom = total * (sum_a + sum_b) - 2 * sum_a * sum_b
    if denom == 0:
        same = table.shape[0] == table.shape[1] and np.count_nonzero(table) == table.shape[0]
        return 1.0 if same else 0.0
    return numer / denom


def multi_projection(H: Hypergraph) -> Hypergraph:
    """Replace every hyperedge by the pairs of its members, keeping repeats.

    A vertex included twice in an edge does not pair with itself.
    """
    edges = []
    for e in H.edges:
        members = list(dict.fromkeys(e))
        edges.extend(combinations(members, 2))
    return Hypergraph(H.n, edges)


def simple_projection(H: Hypergraph) -> Hypergraph:
    """Like :func:`multi_projection` with duplicate pairs collapsed (first occurrence kept)."""
    seen = set()
    edges = []
    for u, v in multi_projection(H).edges:
        key = (u, v) if u < v else (v, u)
        if key not in seen:
            seen.add(key)
            edges.append((u, v))
    return Hypergraph(H.n, edges)
