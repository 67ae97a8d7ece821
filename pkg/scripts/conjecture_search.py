"""Look for optima whose top node of ``I`` has no parent outside ``I``.

Only reports; a hit is printed with its edges. Uniform ``z``, random
outside links, ``|I|`` and ``|out|`` up to 3.

    python scripts/conjecture_search.py --seed 0 --tries 200
"""

import argparse

import numpy as np

from linkopt.brute import conjecture_probe
from linkopt.engine import RankingContext
from linkopt.errors import InapplicableError
from linkopt.graph import WebGraph


def random_instance(rng):
    k = int(rng.integers(1, 4))
    m = int(rng.integers(1, 4))
    n = k + m
    edges = set()
    for j in range(k + 1, n + 1):
        for t in rng.choice(n, size=int(rng.integers(1, 3)), replace=False):
            edges.add((j, int(t) + 1))
    return WebGraph(n, frozenset(edges)), frozenset(range(1, k + 1))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tries", type=int, default=200)
    ap.add_argument("--c", type=float, default=0.85)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    probed = rows = hits = 0
    for _ in range(args.tries):
        g, I = random_instance(rng)
        try:
            report = conjecture_probe(g, I, RankingContext.uniform(g.n, args.c))
        except InapplicableError:
            continue
        probed += 1
        rows += len(report.rows)
        for row in report.counterexamples:
            hits += 1
            print(f"n={g.n} I={sorted(I)} head={row['head']} edges={row['edges']}", flush=True)
    print(f"{probed} instances probed, {rows} optimum heads, {hits} without an outside parent")


if __name__ == "__main__":
    main()
