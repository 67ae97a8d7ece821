"""Random search for small instances reproducing the qualitative claims of
the figure-only examples (internal structure at its lower or upper bound,
target-set optima with and without the website shape).

    python scripts/fixture_search.py internal --seed 0
    python scripts/fixture_search.py target --seed 0
"""

import argparse

import numpy as np

from linkopt.brute import brute_force_optimum, brute_force_target
from linkopt.engine import RankingContext
from linkopt.errors import LinkOptError
from linkopt.graph import WebGraph
from linkopt.structures import verify_internal_structure


def random_externals(rng, n_in, n_out):
    """Links starting outside ``I = {1..n_in}``; every outside node gets one."""
    n = n_in + n_out
    edges = set()
    for j in range(n_in + 1, n + 1):
        k = rng.integers(1, 3)
        for t in rng.choice(n, size=k, replace=False):
            edges.add((j, int(t) + 1))
    return edges


def search_internal(rng, tries):
    found = {}
    I = [1, 2, 3]
    for _ in range(tries):
        n_out = int(rng.integers(2, 4))
        n = 3 + n_out
        fixed = random_externals(rng, 3, n_out)
        if not any(b <= 3 for _, b in fixed):
            continue
        leaking = rng.choice(I, size=2, replace=False)
        out = {(int(i), int(rng.integers(4, n + 1))) for i in leaking}
        g = WebGraph(n, frozenset(fixed | out))
        ctx = RankingContext.uniform(n)
        try:
            res = brute_force_optimum(g, I, ctx, fixed_external_out=out)
        except LinkOptError:
            continue
        if len(res.optima) != 1 or res.top2_gap < 1e-4:
            continue
        cert = verify_internal_structure(res.optima[0].graph(g, I), I, ctx)
        kind = "lower" if cert.info["equals_lower"] else "upper" if cert.info["equals_upper"] else None
        if kind and kind not in found:
            found[kind] = (res.optima[0].graph(g, I), res.top2_gap)
            print(kind, found[kind][0].edge_list(), f"gap={res.top2_gap:.4g}", flush=True)
        if len(found) == 2:
            break
    return found


def search_target(rng, tries):
    found = {}
    I, S = [1, 2, 3], [1, 2]
    for _ in range(tries):
        n_out = int(rng.integers(1, 4))
        n = 3 + n_out
        fixed = random_externals(rng, 3, n_out)
        g = WebGraph(n, frozenset(fixed | {(3, n)}))
        ctx = RankingContext.uniform(n)
        try:
            res = brute_force_target(g, I, S, ctx)
        except LinkOptError:
            continue
        if len(res.optima) != 1:
            continue
        check = res.checks[0]
        kind = "shape" if check["shape_on_I"] else "no-shape" if check["shape_on_S"] else None
        if kind and kind not in found:
            found[kind] = res.optima[0].graph(g, I)
            print(kind, found[kind].edge_list(), check, f"gap={res.top2_gap:.4g}", flush=True)
        if len(found) == 2:
            break
    return found


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("kind", choices=["internal", "target"])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tries", type=int, default=2000)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    if args.kind == "internal":
        search_internal(rng, args.tries)
    else:
        search_target(rng, args.tries)


if __name__ == "__main__":
    main()
