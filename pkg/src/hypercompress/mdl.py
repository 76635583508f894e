"""Choosing the number of clusters by minimum description length.

The total length of a hypergraph given a compression into ``m`` clusters is

    n ln m + sum_{k=2}^{k*} C(m+k-1, k) ln l_k + ln Z

where ``l_k`` counts edges of size ``k``.  Lengths are accumulated in nats
and converted to bits only in the returned records.  Edge sizes with
``l_k = 0`` are skipped; size-1 edges have no partition term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .annealing import ChainConfig, run_restarts, with_m
from .entropy import ObjectiveKind, ln_z
from .hypergraph import Hypergraph, edge_size_histogram
from .state import Clustering, CompressionState

LN2 = math.log(2.0)

CAVEAT = (
    "note: description-length selection tends to underestimate the number of "
    "clusters and may miss the true count; treat m* as a guide."
)


def partition_cost_nats(H: Hypergraph, m: int) -> float:
    """``n ln m + sum_k C(m+k-1, k) ln l_k`` over edge sizes ``k >= 2``."""
    terms = [H.n * math.log(m)]
    for k, count in edge_size_histogram(H).items():
        if k >= 2 and count > 0:
            terms.append(math.comb(m + k - 1, k) * math.log(count))
    return math.fsum(terms)


def description_length(H: Hypergraph, state: CompressionState, kind: ObjectiveKind | str) -> tuple[float, float]:
    """``(partition_bits, conditional_bits)`` of the compression in ``state``."""
    if state.H is not H and state.H != H:
        raise ValueError("state was built over a different hypergraph")
    return partition_cost_nats(H, state.m) / LN2, ln_z(state, kind) / LN2


@dataclass
class MdlRecord:
    m: int
    partition_bits: float
    conditional_bits: float
    best_clustering: Clustering = field(repr=False)
    total_bits: float = field(init=False)

    def __post_init__(self):
        self.total_bits = self.partition_bits + self.conditional_bits


@dataclass
class MdlReport:
    records: list[MdlRecord]
    caveat: str = CAVEAT

    @property
    def m_star(self) -> int:
        best = self.records[0]
        for rec in self.records[1:]:
            if rec.total_bits < best.total_bits:
                best = rec
        return best.m

    def record(self, m: int) -> MdlRecord:
        for rec in self.records:
            if rec.m == m:
                return rec
        raise KeyError(m)


def mdl_sweep(
    H: Hypergraph,
    m_range: range | tuple[int, int],
    config: ChainConfig,
    restarts: int,
    workers: int | None = None,
) -> MdlReport:
    """Cluster ``H`` for each ``m`` in ``m_range`` and record description lengths.

    A ``(lo, hi)`` tuple is inclusive.  Records are ordered by ``m``; ties in
    total length resolve toward the smaller ``m``.
    """
    if isinstance(m_range, tuple):
        m_range = range(m_range[0], m_range[1] + 1)
    ms = sorted(m_range)
    if not ms:
        raise ValueError("empty range of cluster counts")
    if ms[0] < 1:
        raise ValueError("cluster counts must be at least 1")
    records = []
    for m in ms:
        result = run_restarts(H, with_m(config, m), restarts, workers=workers)
        state = CompressionState(H, result.best_clustering)
        partition_bits, conditional_bits = description_length(H, state, config.objective)
        records.append(MdlRecord(m, partition_bits, conditional_bits, result.best_clustering))
    return MdlReport(records)
