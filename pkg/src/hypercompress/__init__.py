"""Hypergraph clustering by minimizing the number of hypergraphs compatible
with a clustered summary (simulated annealing over microcanonical counts)."""

__version__ = "0.1.0"

from .annealing import ChainConfig, RunResult, Schedule, run_chain, run_restarts
from .entropy import ObjectiveKind, delta_ln_z, ln_z
from .evaluation import adjusted_rand_index, multi_projection, simple_projection
from .generator import PlantedConfig, generate, sweep_grid
from .hypergraph import Hypergraph, build, edge_size_histogram
from .mdl import description_length, mdl_sweep
from .state import Clustering, CompressionState

__all__ = [
    "ChainConfig",
    "Clustering",
    "CompressionState",
    "Hypergraph",
    "ObjectiveKind",
    "PlantedConfig",
    "RunResult",
    "Schedule",
    "adjusted_rand_index",
    "build",
    "delta_ln_z",
    "description_length",
    "edge_size_histogram",
    "generate",
    "ln_z",
    "mdl_sweep",
    "multi_projection",
    "run_chain",
    "run_restarts",
    "simple_projection",
    "sweep_grid",
]
