"""Random instances shared by the property tests."""

import numpy as np

from linkopt.engine import RankingContext
from linkopt.graph import WebGraph


def random_graph(rng, n, density=0.3):
    """Random digraph on ``n`` nodes where every node has at least one outlink."""
    adj = rng.random((n, n)) < density
    for i in range(n):
        if not adj[i].any():
            adj[i, rng.integers(n)] = True
    edges = {(i + 1, j + 1) for i, j in zip(*np.nonzero(adj))}
    return WebGraph(n, frozenset(edges))


def random_ctx(rng, n, c=0.85, uniform=True):
    if uniform:
        return RankingContext.uniform(n, c)
    z = rng.random(n) + 0.05
    return RankingContext(c, z / z.sum())


def random_subset(rng, n, low=1, high=None):
    high = n if high is None else high
    k = int(rng.integers(low, high + 1))
    return frozenset(int(x) + 1 for x in rng.choice(n, size=k, replace=False))


def random_fixed_part(rng, k, m, max_out=2):
    """Links starting outside ``I = {1..k}``, for ``m`` outside nodes.

    Only these links matter to the brute-force search; the links of ``I``
    are chosen by the optimizer.
    """
    n = k + m
    edges = set()
    for j in range(k + 1, n + 1):
        d = int(rng.integers(1, max_out + 1))
        for t in rng.choice(n, size=d, replace=False):
            edges.add((j, int(t) + 1))
    return WebGraph(n, frozenset(edges))


def instance_family(seed, count):
    """The desk-scale family: ``|I| <= 3``, ``|out| <= 3``, ``c`` in {0.5, 0.85}, uniform or random ``z``."""
    rng = np.random.default_rng(seed)
    for t in range(count):
        k = int(rng.integers(1, 4))
        m = int(rng.integers(1, 4))
        g = random_fixed_part(rng, k, m)
        c = (0.5, 0.85)[t % 2]
        ctx = random_ctx(rng, k + m, c, uniform=(t // 2) % 2 == 0)
        yield g, frozenset(range(1, k + 1)), ctx
