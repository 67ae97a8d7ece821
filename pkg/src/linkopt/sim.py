"""Monte Carlo random surfer.

Trials run in fixed-size blocks; block ``b`` draws from
``PCG64(SeedSequence([seed, b]))``, so estimates depend only on the seed
and the trial count, never on how many workers share the blocks.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .engine import RankingContext, _require_valid
from .errors import InputError
from .graph import WebGraph, nodeset

BLOCK = 1 << 16
THREADS_ENV = "LINKOPT_THREADS"


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class SimConfig:
    trials: int
    seed: int = 0
    max_steps: int | None = None
    workers: int | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise InputError("trials must be positive")
        if not 0 <= self.seed < 2**64:
            raise InputError("seed must be a 64-bit unsigned integer")
        if self.max_steps is not None and self.max_steps < 1:
            raise InputError("max_steps must be positive")


class SimResult(NamedTuple):
    estimate: float
    stderr: float
    truncated_mass: float


def steps_for(c: float, mass: float = 1e-12) -> int:
    """Smallest ``k`` with ``c**k < mass``."""
    return int(math.floor(math.log(mass) / math.log(c))) + 1


class _Walk:
    def __init__(self, g: WebGraph):
        deg = np.array([g.outdegree(i) for i in g.nodes], dtype=np.int64)
        self.indptr = np.concatenate([[0], np.cumsum(deg)])
        self.indices = np.array([j - 1 for i in g.nodes for j in g.children(i)], dtype=np.int64)
        self.deg = deg

    def follow(self, rng: np.random.Generator, state: np.ndarray) -> np.ndarray:
        pick = (rng.random(state.size) * self.deg[state]).astype(np.int64)
        return self.indices[self.indptr[state] + pick]


def _blocks(trials: int) -> list[tuple[int, int]]:
    return [(b, min(BLOCK, trials - b * BLOCK)) for b in range(-(-trials // BLOCK))]


def _run(cfg: SimConfig, block_fn) -> SimResult:
    blocks = _blocks(cfg.trials)
    workers = cfg.workers or default_workers()
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda bs: block_fn(*bs), blocks))
    else:
        parts = [block_fn(*bs) for bs in blocks]
    total = sum(p[0] for p in parts)
    total_sq = sum(p[1] for p in parts)
    truncated = sum(p[2] for p in parts)
    n = cfg.trials
    mean = total / n
    var = (total_sq - n * mean * mean) / (n - 1) if n > 1 else 0.0
    return SimResult(float(mean), float(math.sqrt(max(var, 0.0) / n)), truncated / n)


def _rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, block])))


def simulate_visits(g: WebGraph, I: Iterable[int], ctx: RankingContext, start: int, cfg: SimConfig) -> SimResult:
    """Visits to ``I`` before the first zap, for a surfer starting at ``start``.

    At every step the surfer follows a uniformly random outlink with
    probability ``c`` and stops otherwise; the start counts as a visit.
    ``truncated_mass`` is the fraction of trajectories cut at ``max_steps``.
    """
    _require_valid(g, ctx)
    I = nodeset(g, I)
    nodeset(g, [start])
    walk = _Walk(g)
    in_set = np.zeros(g.n, dtype=bool)
    in_set[[i - 1 for i in I]] = True
    max_steps = cfg.max_steps or steps_for(ctx.c)

    def block(b, size):
        rng = _rng(cfg.seed, b)
        visits = np.zeros(size, dtype=np.int64)
        alive = np.arange(size)
        state = np.full(size, start - 1, dtype=np.int64)
        for _ in range(max_steps):
            visits[alive] += in_set[state]
            go = rng.random(alive.size) < ctx.c
            alive, state = alive[go], state[go]
            if not alive.size:
                break
            state = walk.follow(rng, state)
        else:
            visits[alive] += in_set[state]
        x = visits.astype(float)
        return x.sum(), (x * x).sum(), int(alive.size)

    return _run(cfg, block)


def simulate_return_time(g: WebGraph, ctx: RankingContext, i: int, cfg: SimConfig) -> SimResult:
    """Mean number of steps of the Google chain to come back to ``i``.

    Each step follows a random outlink with probability ``c`` and jumps to a
    ``z``-distributed node otherwise. The estimate approaches ``1 / pi_i``.
    """
    _require_valid(g, ctx)
    nodeset(g, [i])
    walk = _Walk(g)
    cdf = np.cumsum(ctx.z)
    cdf[-1] = 1.0
    max_steps = cfg.max_steps or 1_000_000
    target = i - 1

    def block(b, size):
        rng = _rng(cfg.seed, b)
        steps = np.zeros(size, dtype=np.int64)
        alive = np.arange(size)
        state = np.full(size, target, dtype=np.int64)
        for _ in range(max_steps):
            follow = rng.random(alive.size) < ctx.c
            nxt = np.empty_like(state)
            nxt[follow] = walk.follow(rng, state[follow])
            jumps = int((~follow).sum())
            nxt[~follow] = np.searchsorted(cdf, rng.random(jumps), side="right")
            steps[alive] += 1
            back = nxt == target
            alive, state = alive[~back], nxt[~back]
            if not alive.size:
                break
        x = steps.astype(float)
        return x.sum(), (x * x).sum(), int(alive.size)

    return _run(cfg, block)
