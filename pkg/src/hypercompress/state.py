"""Sufficient statistics of a clustering of a fixed hypergraph.

A lambda-type is stored as a tuple of ``(label, count)`` pairs with nonzero
counts, sorted by label: the edge ``{0, 1, 2}`` with labels ``[0, 0, 1]``
has type ``((0, 2), (1, 1))``.  Types are hashable and canonical, so they
key the edge-type counts directly.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .hypergraph import Hypergraph

LambdaType = tuple  # tuple[tuple[int, int], ...]


def lambda_type(labels: Sequence[int], edge: Sequence[int]) -> LambdaType:
    """Canonical intersection-count type of ``edge`` under ``labels``."""
    return tuple(sorted(Counter(labels[v] for v in edge).items()))


def type_count(t: LambdaType, label: int) -> int:
    for lab, c in t:
        if lab == label:
            return c
    return 0


_SHIFT_CACHE: dict = {}


def shift_type(t: LambdaType, a: int, b: int, mult: int) -> tuple[LambdaType, int, int]:
    """Move ``mult`` members from label ``a`` to ``b``.

    Returns ``(new_type, old_count_a, old_count_b)``.  Memoized; the number
    of distinct arguments is bounded by types times label pairs.
    """
    key = (t, a, b, mult)
    hit = _SHIFT_CACHE.get(key)
    if hit is not None:
        return hit
    d = dict(t)
    sa = d[a]
    sb = d.get(b, 0)
    if sa == mult:
        del d[a]
    else:
        d[a] = sa - mult
    d[b] = sb + mult
    out = (tuple(sorted(d.items())), sa, sb)
    if len(_SHIFT_CACHE) > 2_000_000:
        _SHIFT_CACHE.clear()
    _SHIFT_CACHE[key] = out
    return out


@dataclass(frozen=True)
class Clustering:
    """Label vector ``labels`` with entries in ``[0, m)``; empty clusters are legal."""

    labels: tuple[int, ...]
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be at least 1")
        for v, c in enumerate(self.labels):
            if not 0 <= c < self.m:
                raise ValueError(f"label {c} of vertex {v} outside [0, {self.m})")

    @classmethod
    def of(cls, labels: Sequence[int], m: int | None = None) -> "Clustering":
        labels = tuple(int(c) for c in labels)
        if m is None:
            m = max(labels, default=0) + 1
        return cls(labels, m)

    def __len__(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class MoveDelta:
    """Undo record for one :meth:`CompressionState.apply_move`."""

    v: int
    old_label: int
    new_label: int
    serial: int


class CompressionState:
    """Cluster sizes, cluster degree sums, edge-type counts and per-cluster
    intersection histograms for ``(H, labels)``, kept current under
    single-vertex moves.

    Attributes
    ----------
    sizes : list of int
        ``|C_i|`` per label.
    degree_sums : list of int
        ``e_i``, total degree of the vertices in cluster ``i``.
    lambda_counts : dict
        lambda-type -> number of edges of that type (zero entries removed).
    histograms : list of dict
        ``histograms[i][s]`` is the number of edges meeting cluster ``i`` in
        exactly ``s >= 1`` inclusions.
    edge_types : list
        current lambda-type of each edge.
    types_by_label : list of set
        lambda-types present in ``lambda_counts`` that involve label ``i``.
    """

    def __init__(self, H: Hypergraph, clustering: Clustering | Sequence[int], m: int | None = None, debug: bool = False):
        if not isinstance(clustering, Clustering):
            clustering = Clustering.of(clustering, m)
        elif m is not None and m != clustering.m:
            clustering = Clustering(clustering.labels, m)
        if len(clustering.labels) != H.n:
            raise ValueError(f"clustering has {len(clustering.labels)} labels, hypergraph has {H.n} vertices")
        self.H = H
        self.m = clustering.m
        self.labels = list(clustering.labels)
        self.debug = debug
        self._serial = 0
        self._journal: list[int] = []
        self._recompute()

    def _recompute(self) -> None:
        H, m, labels = self.H, self.m, self.labels
        sizes = [0] * m
        degree_sums = [0] * m
        for v, c in enumerate(labels):
            sizes[c] += 1
            degree_sums[c] += H.degrees[v]
        edge_types = [lambda_type(labels, e) for e in H.edges]
        lambda_counts = dict(Counter(edge_types))
        histograms: list[dict[int, int]] = [{} for _ in range(m)]
        types_by_label: list[set] = [set() for _ in range(m)]
        for t, cnt in lambda_counts.items():
            for lab, s in t:
                h = histograms[lab]
                h[s] = h.get(s, 0) + cnt
                types_by_label[lab].add(t)
        self.sizes = sizes
        self.degree_sums = degree_sums
        self.edge_types = edge_types
        self.lambda_counts = lambda_counts
        self.histograms = histograms
        self.types_by_label = types_by_label

    @property
    def clustering(self) -> Clustering:
        return Clustering(tuple(self.labels), self.m)

    def copy(self) -> "CompressionState":
        return CompressionState(self.H, self.clustering, debug=self.debug)

    def snapshot(self) -> dict:
        """Plain-data view of every statistic, for equality checks."""
        return {
            "labels": list(self.labels),
            "sizes": list(self.sizes),
            "degree_sums": list(self.degree_sums),
            "lambda_counts": dict(self.lambda_counts),
            "histograms": [dict(h) for h in self.histograms],
            "edge_types": list(self.edge_types),
            "types_by_label": [set(s) for s in self.types_by_label],
        }

    def _bump_type(self, t: LambdaType, by: int) -> None:
        counts = self.lambda_counts
        new = counts.get(t, 0) + by
        if new:
            if new == by:
                for lab, _ in t:
                    self.types_by_label[lab].add(t)
            counts[t] = new
        else:
            del counts[t]
            for lab, _ in t:
                self.types_by_label[lab].discard(t)

    def _move(self, v: int, a: int, b: int) -> None:
        H = self.H
        d = H.degrees[v]
        self.sizes[a] -= 1
        self.sizes[b] += 1
        self.degree_sums[a] -= d
        self.degree_sums[b] += d
        ha = self.histograms[a]
        hb = self.histograms[b]
        edge_types = self.edge_types
        for e, mult in H.incident_edges(v):
            t = edge_types[e]
            t2, sa, sb = shift_type(t, a, b, mult)
            self._bump_type(t, -1)
            self._bump_type(t2, 1)
            edge_types[e] = t2
            if ha[sa] == 1:
                del ha[sa]
            else:
                ha[sa] -= 1
            if sa > mult:
                ha[sa - mult] = ha.get(sa - mult, 0) + 1
            if sb:
                if hb[sb] == 1:
                    del hb[sb]
                else:
                    hb[sb] -= 1
            hb[sb + mult] = hb.get(sb + mult, 0) + 1
        self.labels[v] = b

    def apply_move(self, v: int, new_label: int) -> MoveDelta:
        """Relabel vertex ``v`` and update every statistic in place."""
        if not 0 <= new_label < self.m:
            raise ValueError(f"label {new_label} outside [0, {self.m})")
        a = self.labels[v]
        if a != new_label:
            self._move(v, a, new_label)
        self._serial += 1
        if self.debug:
            self._journal.append(self._serial)
        return MoveDelta(v, a, new_label, self._serial)

    def undo(self, delta: MoveDelta) -> None:
        """Revert the most recent un-undone move."""
        if self.debug:
            if not self._journal or self._journal[-1] != delta.serial:
                raise RuntimeError("undo of a move that is not the most recent one")
            self._journal.pop()
        if self.labels[delta.v] != delta.new_label:
            raise RuntimeError("stale MoveDelta: vertex label does not match")
        if delta.old_label != delta.new_label:
            self._move(delta.v, delta.new_label, delta.old_label)

    def check_invariants(self) -> None:
        """Raise AssertionError unless every statistic matches a fresh recompute."""
        fresh = CompressionState(self.H, self.clustering)
        assert fresh.snapshot() == self.snapshot(), "statistics drifted from recompute"
        H = self.H
        assert sum(self.sizes) == H.n
        assert sum(self.degree_sums) == sum(H.degrees)
        assert sum(self.lambda_counts.values()) == H.num_edges
        for i in range(self.m):
            assert self.degree_sums[i] == sum(type_count(t, i) * c for t, c in self.lambda_counts.items())
