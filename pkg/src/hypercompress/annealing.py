"""Simulated annealing over clusterings with Metropolis acceptance.

Each step draws a vertex and a candidate label uniformly, prices the
relabeling with :func:`~hypercompress.entropy.delta_ln_z` and accepts it with
probability ``min(1, exp(-beta(t) * delta))``.  The lowest-ln Z clustering
seen along the walk is returned.

Random streams: chain ``r`` of a run seeded with ``seed`` draws from
``PCG64(SeedSequence(seed, spawn_key=(r,)))``.  A single chain is stream 0,
so ``run_restarts(..., restarts=1)`` reproduces ``run_chain`` exactly.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .entropy import ObjectiveKind, _delta_dc, _delta_multi, _delta_simple, check_objective, ln_z
from .hypergraph import Hypergraph
from .state import Clustering, CompressionState

log = logging.getLogger(__name__)

WORKERS_ENV = "HYPERCOMPRESS_WORKERS"
RESYNC_EVERY = 100_000
DRIFT_TOLERANCE = 1e-6
_CHUNK = 1 << 16


@dataclass(frozen=True)
class Schedule:
    """Inverse temperature as a function of the step index.

    ``constant``: beta0 throughout.  ``geometric``: ``beta0 * rate**t``.
    ``linear``: ``beta0 -> beta1`` over ``span`` steps, then held.
    """

    kind: str = "geometric"
    beta0: float = 0.1
    rate: float = 1.0
    beta1: float = 10.0
    span: int = 1

    def __post_init__(self):
        if self.kind not in ("constant", "geometric", "linear"):
            raise ValueError(f"unknown schedule kind {self.kind!r}")
        if self.beta0 < 0 or self.beta1 < 0:
            raise ValueError("inverse temperatures must be nonnegative")
        if self.kind == "geometric" and self.rate <= 0:
            raise ValueError("geometric rate must be positive")

    @classmethod
    def constant(cls, beta: float) -> "Schedule":
        return cls("constant", beta0=beta, beta1=beta)

    @classmethod
    def geometric(cls, beta0: float, rate: float) -> "Schedule":
        return cls("geometric", beta0=beta0, rate=rate)

    @classmethod
    def geometric_to(cls, beta0: float, beta_final: float, steps: int) -> "Schedule":
        """Geometric schedule reaching ``beta_final`` at step ``steps``."""
        if beta0 <= 0:
            raise ValueError("geometric schedule needs beta0 > 0")
        rate = (beta_final / beta0) ** (1.0 / max(steps, 1))
        return cls("geometric", beta0=beta0, rate=rate, beta1=beta_final, span=max(steps, 1))

    @classmethod
    def linear(cls, beta0: float, beta1: float, steps: int) -> "Schedule":
        return cls("linear", beta0=beta0, beta1=beta1, span=max(steps, 1))

    @classmethod
    def default(cls, steps: int) -> "Schedule":
        return cls.geometric_to(0.1, 10.0, steps)

    def beta(self, t: int) -> float:
        return float(self.betas(t, t + 1)[0])

    def betas(self, start: int, stop: int) -> np.ndarray:
        t = np.arange(start, stop, dtype=float)
        if self.kind == "constant":
            return np.full(t.shape, self.beta0)
        if self.kind == "geometric":
            return self.beta0 * np.power(self.rate, t)
        frac = np.minimum(t / self.span, 1.0)
        return self.beta0 + (self.beta1 - self.beta0) * frac

    def to_dict(self) -> dict:
        return {"kind": self.kind, "beta0": self.beta0, "rate": self.rate, "beta1": self.beta1, "span": self.span}


@dataclass(frozen=True)
class ChainConfig:
    """Parameters of one annealing chain.

    ``initial=None`` draws a uniform random clustering from the chain's own
    stream; otherwise the given labels are the starting point.  ``schedule``
    defaults to ``Schedule.default(steps)``.
    """

    m: int
    steps: int
    seed: int = 0
    objective: ObjectiveKind | str = ObjectiveKind.DEGREE_CORRECTED
    schedule: Schedule | None = None
    initial: Clustering | Sequence[int] | None = None
    trace_every: int = 0

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be at least 1")
        if self.steps < 0:
            raise ValueError("steps must be nonnegative")
        object.__setattr__(self, "objective", ObjectiveKind.parse(self.objective))

    @property
    def effective_schedule(self) -> Schedule:
        return self.schedule if self.schedule is not None else Schedule.default(self.steps)


@dataclass
class RunResult:
    best_clustering: Clustering
    best_ln_z: float
    accepted_count: int
    seed: int
    stream: int = 0
    steps: int = 0
    final_ln_z: float = math.nan
    trace: list[tuple[int, float, float]] | None = field(default=None, repr=False)


def metropolis_accept(delta: float, beta: float, u: float) -> bool:
    """Accept when ``u < min(1, exp(-beta * delta))``.

    ``-inf`` (proposal incompatible) always rejects; ``+inf`` (leaving an
    incompatible state) and ``nan`` (both incompatible) always accept.
    """
    if delta <= 0.0:
        return delta != -math.inf
    if delta != delta or delta == math.inf:
        return True
    return u < math.exp(-beta * delta)


def stream_rng(seed: int, stream: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(stream,))))


_DELTAS = {
    ObjectiveKind.DEGREE_CORRECTED: _delta_dc,
    ObjectiveKind.MULTI: _delta_multi,
    ObjectiveKind.SIMPLE: _delta_simple,
    ObjectiveKind.RB_GRAPH: _delta_simple,
}


def _as_rank(x: float) -> float:
    # incompatible (-inf) states rank last when picking a best run
    return math.inf if x == -math.inf or x != x else x


def run_chain(
    H: Hypergraph,
    config: ChainConfig,
    *,
    stream: int = 0,
    visit: Callable[[int, list[int]], None] | None = None,
) -> RunResult:
    """Run one annealing chain of exactly ``config.steps`` proposals.

    ``visit(t, labels)`` is called after every step with the live label list
    (do not mutate it); intended for sampling diagnostics.
    """
    kind = config.objective
    check_objective(H, kind)
    m, n, steps = config.m, H.n, config.steps
    rng = stream_rng(config.seed, stream)
    if config.initial is None:
        labels = rng.integers(0, m, size=n).tolist()
    else:
        init = config.initial.labels if isinstance(config.initial, Clustering) else config.initial
        labels = [int(c) for c in init]
    state = CompressionState(H, Clustering.of(labels, m))
    current = ln_z(state, kind)
    best = _as_rank(current)
    best_labels = list(state.labels)
    accepted = 0
    since_resync = 0
    trace: list[tuple[int, float, float]] | None = [] if config.trace_every > 0 else None
    schedule = config.effective_schedule
    delta_fn = _DELTAS[kind]
    labels = state.labels
    move = state._move
    exp = math.exp

    if n > 0:
        for start in range(0, steps, _CHUNK):
            stop = min(start + _CHUNK, steps)
            size = stop - start
            vs = rng.integers(0, n, size=size).tolist()
            cs = rng.integers(0, m, size=size).tolist()
            us = rng.random(size).tolist()
            betas = schedule.betas(start, stop).tolist()
            for k in range(size):
                v = vs[k]
                b = cs[k]
                a = labels[v]
                if a == b:
                    accepted += 1
                else:
                    delta = delta_fn(state, v, a, b, None)
                    if delta <= 0.0:
                        ok = delta != -math.inf
                    elif delta != delta or delta == math.inf:
                        ok = True
                    else:
                        ok = us[k] < exp(-betas[k] * delta)
                    if ok:
                        move(v, a, b)
                        accepted += 1
                        since_resync += 1
                        if delta == math.inf or delta != delta or since_resync >= RESYNC_EVERY:
                            exact = ln_z(state, kind)
                            drift = exact - (current + delta)
                            if math.isfinite(drift) and abs(drift) > DRIFT_TOLERANCE:
                                log.warning("ln Z drift %.3g resynchronized", drift)
                            current = exact
                            since_resync = 0
                        else:
                            current += delta
                        if current < best and current != -math.inf:
                            best = current
                            best_labels = list(labels)
                if visit is not None:
                    visit(start + k, labels)
                if trace is not None and (start + k + 1) % config.trace_every == 0:
                    trace.append((start + k + 1, current, best))

    best_clustering = Clustering(tuple(best_labels), m)
    best_ln_z = ln_z(CompressionState(H, best_clustering), kind)
    return RunResult(
        best_clustering=best_clustering,
        best_ln_z=best_ln_z,
        accepted_count=accepted,
        seed=config.seed,
        stream=stream,
        steps=steps,
        final_ln_z=current,
        trace=trace,
    )


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _run_stream(args):
    H, config, stream = args
    return run_chain(H, config, stream=stream)


def run_all_restarts(H: Hypergraph, config: ChainConfig, restarts: int, workers: int | None = None) -> list[RunResult]:
    """Run ``restarts`` independent chains (streams ``0..restarts-1``), in order."""
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    check_objective(H, config.objective)
    workers = default_workers() if workers is None else workers
    jobs = [(H, config, r) for r in range(restarts)]
    if workers <= 1 or restarts == 1:
        return [_run_stream(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, restarts)) as pool:
        return list(pool.map(_run_stream, jobs))


def select_best(results: Sequence[RunResult]) -> RunResult:
    """Lowest ``best_ln_z``; ties go to the earliest result."""
    best = results[0]
    for r in results[1:]:
        if _as_rank(r.best_ln_z) < _as_rank(best.best_ln_z):
            best = r
    return best


def run_restarts(H: Hypergraph, config: ChainConfig, restarts: int, workers: int | None = None) -> RunResult:
    """Best of ``restarts`` independent chains.

    The result does not depend on ``workers``: chains are reduced in stream
    order regardless of completion order.
    """
    return select_best(run_all_restarts(H, config, restarts, workers))


def with_m(config: ChainConfig, m: int) -> ChainConfig:
    return replace(config, m=m, initial=None)
