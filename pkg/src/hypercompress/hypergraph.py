"""Immutable hypergraph representation.

Vertices are dense integer ids ``0..n-1``.  Hyperedges are tuples of vertex
ids; a vertex may appear more than once in an edge only when the hypergraph
is built with ``allow_multi_inclusion=True``, in which case it contributes
one unit of degree per inclusion.
"""

from __future__ import annotations

from collections import Counter
from typing import Iterable, Sequence


class Hypergraph:
    """Vertex/edge incidence structure with a degree sequence.

    Parameters
    ----------
    n : int
        Number of vertices.
    edges : sequence of tuple of int
        Hyperedges as vertex-id tuples.
    allow_multi_inclusion : bool
        Whether repeated vertices inside one edge are legal.

    Notes
    -----
    ``incidence[v]`` lists the index of every edge containing ``v``, once
    per inclusion, so ``len(incidence[v]) == degrees[v]``.
    """

    __slots__ = ("n", "edges", "degrees", "incidence", "allow_multi_inclusion", "_incident_mult", "_max_size", "_dyadic")

    def __init__(self, n: int, edges: Sequence[tuple[int, ...]], allow_multi_inclusion: bool = False):
        degrees = [0] * n
        incidence: list[list[int]] = [[] for _ in range(n)]
        incident_mult: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for idx, edge in enumerate(edges):
            counts = Counter(edge)
            for v, mult in counts.items():
                degrees[v] += mult
                incidence[v].extend([idx] * mult)
                incident_mult[v].append((idx, mult))
        self.n = n
        self.edges = tuple(edges)
        self.degrees = tuple(degrees)
        self.incidence = tuple(tuple(lst) for lst in incidence)
        self.allow_multi_inclusion = allow_multi_inclusion
        # (edge index, multiplicity of v in edge), one entry per distinct edge
        self._incident_mult = tuple(tuple(lst) for lst in incident_mult)
        self._max_size = max((len(e) for e in self.edges), default=0)
        self._dyadic = all(len(e) == 2 for e in self.edges)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def incident_edges(self, v: int) -> tuple[tuple[int, int], ...]:
        """Pairs ``(edge_index, multiplicity)`` for each distinct edge containing ``v``."""
        return self._incident_mult[v]

    def max_edge_size(self) -> int:
        return self._max_size

    def is_dyadic(self) -> bool:
        """True when every edge has exactly two members (vacuously for no edges)."""
        return self._dyadic

    def edge_list(self) -> list[list[int]]:
        return [list(e) for e in self.edges]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (
            self.n == other.n
            and self.edges == other.edges
            and self.allow_multi_inclusion == other.allow_multi_inclusion
        )

    def __hash__(self) -> int:
        return hash((self.n, self.edges, self.allow_multi_inclusion))

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.n}, num_edges={len(self.edges)})"

    def __reduce__(self):
        return (Hypergraph, (self.n, self.edges, self.allow_multi_inclusion))


def build(
    edge_list: Iterable[Iterable[int]],
    allow_multi_inclusion: bool = False,
    n: int | None = None,
) -> Hypergraph:
    """Validate an edge list and build a :class:`Hypergraph`.

    ``n`` defaults to ``1 + max id``; pass it explicitly to keep trailing
    isolated vertices.

    Raises
    ------
    ValueError
        On negative ids, empty edges, ids outside an explicit ``n``, or a
        repeated vertex inside an edge when multi-inclusion is off.
    """
    edges = []
    max_id = -1
    for idx, raw in enumerate(edge_list):
        edge = tuple(int(v) for v in raw)
        if not edge:
            raise ValueError(f"edge {idx} is empty")
        if min(edge) < 0:
            raise ValueError(f"edge {idx} has a negative vertex id")
        if not allow_multi_inclusion and len(set(edge)) != len(edge):
            raise ValueError(f"edge {idx} repeats a vertex; pass allow_multi_inclusion=True to permit this")
        max_id = max(max_id, max(edge))
        edges.append(edge)
    if n is None:
        n = max_id + 1
    elif n <= max_id:
        raise ValueError(f"n={n} but edges reference vertex {max_id}")
    return Hypergraph(n, edges, allow_multi_inclusion)


def edge_size_histogram(H: Hypergraph) -> dict[int, int]:
    """Map edge size ``k`` to the number of edges of that size."""
    return dict(sorted(Counter(len(e) for e in H.edges).items()))
