"""Two-block planted-partition hypergraphs with 2- and 3-edges.

Vertices ``0..n-1`` form block 0 and ``n..2n-1`` block 1.  The generator
emits exactly ``5n`` 2-edges and ``round(10n/3)`` 3-edges (half rounded
up), so every vertex has expected degree 10.  A 2-edge lies inside a block
with probability ``p2``, otherwise it joins one vertex of each block.  A
3-edge lies inside a block with probability ``p3``, otherwise it takes two
vertices from a uniformly chosen block and one from the other.  Edges are
drawn independently, so duplicates can occur.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .annealing import ChainConfig, run_restarts, with_m
from .evaluation import adjusted_rand_index, multi_projection, simple_projection
from .hypergraph import Hypergraph, build
from .state import Clustering

HEATMAP_COLUMNS = ("p2", "p3", "mean_ari", "n_graphs", "n_restarts")


@dataclass(frozen=True)
class PlantedConfig:
    n: int = 200
    p2: float = 0.5
    p3: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("cluster size must be at least 3")
        for name in ("p2", "p3"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0 or math.isnan(p):
                raise ValueError(f"{name}={p} is not a proportion in [0, 1]")


def edge_counts(n: int) -> tuple[int, int]:
    """Number of 2-edges and 3-edges for blocks of size ``n``."""
    return 5 * n, math.floor(10 * n / 3 + 0.5)


def generate(config: PlantedConfig) -> tuple[Hypergraph, Clustering]:
    """Sample a planted hypergraph and its ground-truth block labels."""
    n = config.n
    rng = np.random.default_rng(config.seed)
    n2, n3 = edge_counts(n)
    edges: list[tuple[int, ...]] = []
    for _ in range(n2):
        if rng.random() < config.p2:
            block = int(rng.integers(2))
            pair = rng.choice(n, size=2, replace=False) + block * n
            edges.append(tuple(int(x) for x in pair))
        else:
            edges.append((int(rng.integers(n)), n + int(rng.integers(n))))
    for _ in range(n3):
        if rng.random() < config.p3:
            block = int(rng.integers(2))
            triple = rng.choice(n, size=3, replace=False) + block * n
            edges.append(tuple(int(x) for x in triple))
        else:
            major = int(rng.integers(2))
            pair = rng.choice(n, size=2, replace=False) + major * n
            other = int(rng.integers(n)) + (1 - major) * n
            edges.append((int(pair[0]), int(pair[1]), other))
    truth = Clustering(tuple([0] * n + [1] * n), 2)
    return build(edges, n=2 * n), truth


def within_fractions(H: Hypergraph, truth: Clustering) -> tuple[float, float]:
    """Fraction of 2-edges and of 3-edges lying inside one block."""
    inside = {2: 0, 3: 0}
    total = {2: 0, 3: 0}
    for e in H.edges:
        k = len(e)
        total[k] += 1
        inside[k] += len({truth.labels[v] for v in e}) == 1
    return inside[2] / max(total[2], 1), inside[3] / max(total[3], 1)


def graph_seed(seed: int, p2: float, p3: float, graph: int) -> int:
    """Seed of hypergraph ``graph`` in cell ``(p2, p3)``, shared across objectives."""
    ss = np.random.SeedSequence([seed, round(p2 * 1_000_000), round(p3 * 1_000_000), graph])
    return int(ss.generate_state(1)[0])


def grid_values(resolution: int) -> list[float]:
    if resolution < 2:
        raise ValueError("grid resolution must be at least 2")
    return [round(float(x), 12) for x in np.linspace(0.0, 1.0, resolution)]


def cell_mean_ari(
    n: int,
    p2: float,
    p3: float,
    graphs: int,
    chain: ChainConfig,
    restarts: int,
    seed: int = 0,
    projection: str | None = None,
    workers: int | None = None,
) -> float:
    """Mean ARI over ``graphs`` planted hypergraphs, each clustered by the
    lowest-entropy run of ``restarts`` chains with two clusters."""
    chain = with_m(chain, 2)
    scores = []
    for g in range(graphs):
        H, truth = generate(PlantedConfig(n, p2, p3, graph_seed(seed, p2, p3, g)))
        if projection == "simple":
            H = simple_projection(H)
        elif projection == "multi":
            H = multi_projection(H)
        elif projection is not None:
            raise ValueError(f"unknown projection {projection!r}")
        result = run_restarts(H, chain, restarts, workers=workers)
        scores.append(adjusted_rand_index(truth, result.best_clustering))
    return float(np.mean(scores))


def sweep_grid(
    n: int,
    resolution: int,
    graphs_per_cell: int,
    chain: ChainConfig,
    restarts: int,
    seed: int = 0,
    projection: str | None = None,
    skip: Iterable[tuple[float, float]] = (),
    on_row: Callable[[dict], None] | None = None,
    workers: int | None = None,
) -> list[dict]:
    """Mean ARI for every ``(p2, p3)`` cell of a ``resolution x resolution`` grid.

    Cells listed in ``skip`` are not computed.  ``on_row`` receives each row
    as soon as its cell finishes.
    """
    done = {(round(a, 9), round(b, 9)) for a, b in skip}
    rows = []
    for p2 in grid_values(resolution):
        for p3 in grid_values(resolution):
            if (round(p2, 9), round(p3, 9)) in done:
                continue
            ari = cell_mean_ari(n, p2, p3, graphs_per_cell, chain, restarts, seed, projection, workers)
            row = {"p2": p2, "p3": p3, "mean_ari": ari, "n_graphs": graphs_per_cell, "n_restarts": restarts}
            rows.append(row)
            if on_row is not None:
                on_row(row)
    return rows


def format_row(row: dict) -> list[str]:
    return [repr(float(row["p2"])), repr(float(row["p3"])), repr(float(row["mean_ari"])),
            str(int(row["n_graphs"])), str(int(row["n_restarts"]))]


def read_heatmap(path) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            return []
        if tuple(reader.fieldnames) != HEATMAP_COLUMNS:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        return [
            {"p2": float(r["p2"]), "p3": float(r["p3"]), "mean_ari": float(r["mean_ari"]),
             "n_graphs": int(r["n_graphs"]), "n_restarts": int(r["n_restarts"])}
            for r in reader
        ]
