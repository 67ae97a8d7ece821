"""Print the worked-example values from the bundled fixtures.

    python scripts/reproduce_examples.py
"""

import numpy as np

from linkopt.brute import brute_force_optimum, brute_force_target
from linkopt.calculus import OutlinkMutation, updated_set_pagerank
from linkopt.engine import RankingContext, set_pagerank, v_top_set, visit_vector
from linkopt import fixtures as fx
from linkopt.structures import (
    build_optimal_structure,
    verify_internal_structure,
    verify_outlink_structure,
    verify_website_opt_shape,
)

C = 0.85


def uni(g):
    return RankingContext.uniform(g.n, C)


def show(title, *lines):
    print(title)
    for line in lines:
        print("   ", line)


def main():
    np.set_printoptions(precision=4, suppress=True)

    ctx = uni(fx.G_FIG2)
    v = visit_vector(fx.G_FIG2, fx.I_FIG2, ctx)
    show("fig2, I={1}", f"v = {v}", f"V = {sorted(v_top_set(fx.G_FIG2, fx.I_FIG2, ctx, v).nodes)}")
    best, value = build_optimal_structure(fx.G_FIG2, fx.I_FIG2, ctx)
    show("fig2, best singleton links", f"{sorted(e for e in best.edges if e[0] == 1)} -> {value:.4f}")

    cert = verify_outlink_structure(fx.G_EX5, fx.I_EX5, uni(fx.G_EX5))
    res = brute_force_optimum(fx.G_EX5, fx.I_EX5, uni(fx.G_EX5), fixed_internal=fx.EI_EX5)
    show("ex5, internal links fixed", f"final classes {cert.info['final_classes']}, V = {cert.info['V']}",
         f"{len(res.optima)} optima at {res.value:.5f}")

    ctx = uni(fx.G_EX8)
    show("ex8", f"v_I = {visit_vector(fx.G_EX8, fx.I_EX8, ctx)[:3]}",
         f"pi_I = {set_pagerank(fx.G_EX8, fx.I_EX8, ctx):.4f}",
         *(f"drop (1,{j}) -> {updated_set_pagerank(fx.G_EX8, fx.I_EX8, ctx, OutlinkMutation.remove_link(fx.G_EX8, 1, j)):.4f}"
           for j in (3, 2)))

    for name, g in (("ex10a", fx.G_EX10A), ("ex10b", fx.G_EX10B)):
        cert = verify_internal_structure(g, fx.I_EX10, uni(g))
        show(name, f"ordering {cert.ordering}, lower bound {cert.info['equals_lower']}, "
                   f"upper bound {cert.info['equals_upper']}")

    for name, g in (("ex12a", fx.G_EX12A), ("ex12b", fx.G_EX12B)):
        ctx = uni(g)
        show(name, f"v = {visit_vector(g, fx.I_EX12, ctx)}", f"pi_I = {set_pagerank(g, fx.I_EX12, ctx):.4f}",
             f"shape ok: {verify_website_opt_shape(g, fx.I_EX12, ctx).satisfied}")
    z = RankingContext(C, np.array(fx.Z_EX12))
    show("ex12 with skewed z", *(f"{n}: {set_pagerank(g, fx.I_EX12, z):.4f}"
                                 for n, g in (("a", fx.G_EX12A), ("b", fx.G_EX12B))))

    for name, g in (("ex14a", fx.G_EX14A), ("ex14b", fx.G_EX14B)):
        res = brute_force_target(g, fx.I_EX14, fx.S_EX14, uni(g))
        show(name, f"target optimum {res.value:.5f}, gap {res.top2_gap:.5f}", f"checks {res.checks}")

    for name, g, I, j, i in (("ex15", fx.G_EX15, fx.I_EX15, 3, 2), ("ex16", fx.G_EX16, fx.I_EX16, 4, 3)):
        ctx = uni(g)
        show(name, f"{set_pagerank(g, I, ctx):.4f} -> {set_pagerank(g.with_edges(add=[(j, i)]), I, ctx):.4f} "
                   f"after adding ({j},{i})")

    ctx = uni(fx.G_FIG1)
    show("fig1", f"shape ok: {verify_website_opt_shape(fx.G_FIG1, fx.I_FIG1, ctx).satisfied}, "
                 f"pi_I = {set_pagerank(fx.G_FIG1, fx.I_FIG1, ctx):.5f}")


if __name__ == "__main__":
    main()
