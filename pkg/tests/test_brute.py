import itertools

import numpy as np
import pytest

from linkopt.brute import (
    brute_force_optimum,
    brute_force_target,
    conjecture_probe,
    enumerate_admissible,
    evaluate_by_pagerank,
)
from linkopt.engine import RankingContext, set_pagerank
from linkopt.errors import (
    ComplementEmptyError,
    DanglingNodeError,
    InapplicableError,
    InputError,
    SearchCapExceeded,
)
from linkopt.fixtures import (
    EI_EX5,
    G_EX5,
    G_EX12A,
    G_EX12B,
    G_EX14A,
    G_EX14B,
    G_FIG2,
    I_EX5,
    I_EX12,
    I_EX14,
    I_FIG2,
    S_EX14,
    Z_EX12,
)
from linkopt.graph import WebGraph, check_accessibility, complement, partition_links
from linkopt.structures import StructureConstraints, build_optimal_structure

from helpers import instance_family, random_fixed_part

C = 0.85


def uni(g):
    return RankingContext.uniform(g.n, C)


def naive_admissible(g_fixed, I, allow_self=True, r=1):
    """Every subset of candidate links, filtered on the built graph."""
    I = sorted(I)
    out = sorted(complement(g_fixed, I))
    fixed = {e for e in g_fixed.edges if e[0] not in I}
    pairs = [(a, b) for a in I for b in I if allow_self or a != b] + [(a, b) for a in I for b in out]
    found = set()
    for k in range(len(pairs) + 1):
        for chosen in itertools.combinations(pairs, k):
            g = WebGraph(g_fixed.n, frozenset(fixed | set(chosen)))
            if len(partition_links(g, I).external_out) < r:
                continue
            if check_accessibility(g, I):
                found.add(frozenset(chosen))
    return found


def test_enumerate_two_node_graph():
    g = WebGraph(2, frozenset({(2, 1)}))
    configs = list(enumerate_admissible(g, {1}))
    assert len(configs) == 2
    assert {c.internal for c in configs} == {frozenset(), frozenset({(1, 1)})}
    assert len(list(enumerate_admissible(g, {1}, StructureConstraints(allow_self_links=False)))) == 1


@pytest.mark.parametrize("seed", range(6))
def test_enumerate_matches_naive(seed):
    rng = np.random.default_rng(seed)
    k, m = (2, 1) if seed % 2 == 0 else (2, 2)
    g = random_fixed_part(rng, k, m)
    I = set(range(1, k + 1))
    for allow_self, r in ((True, 1), (False, 1), (True, 2)):
        if r > m:
            continue
        rules = StructureConstraints(allow_self_links=allow_self, min_external_outlinks=r)
        got = {c.internal | c.external_out for c in enumerate_admissible(g, I, rules)}
        assert got == naive_admissible(g, I, allow_self, r)


def test_space_errors():
    with pytest.raises(DanglingNodeError):
        brute_force_optimum(WebGraph(3, frozenset({(2, 1)})), {1}, RankingContext.uniform(3))
    with pytest.raises(ComplementEmptyError):
        brute_force_optimum(WebGraph(2, frozenset()), {1, 2}, RankingContext.uniform(2))
    with pytest.raises(SearchCapExceeded):
        brute_force_optimum(G_FIG2, {1, 2, 3, 4}, uni(G_FIG2))
    with pytest.raises(InputError):
        brute_force_optimum(G_EX5, I_EX5, uni(G_EX5), fixed_internal=[(1, 6)])


def test_search_cap_is_configurable():
    g = random_fixed_part(np.random.default_rng(0), 3, 3)
    with pytest.raises(SearchCapExceeded):
        brute_force_optimum(g, {1, 2, 3}, uni(g), cap_bits=17)


def test_singleton_fig2():
    res = brute_force_optimum(G_FIG2, I_FIG2, uni(G_FIG2))
    assert round(res.value, 4) == 0.2600
    assert {c.external_out for c in res.optima} == {frozenset({(1, j)}) for j in (2, 3, 4)}
    assert all(c.internal == {(1, 1)} for c in res.optima)
    _, built = build_optimal_structure(G_FIG2, I_FIG2, uni(G_FIG2))
    assert built == pytest.approx(res.value, abs=1e-12)


def test_example5_fixed_internal():
    res = brute_force_optimum(G_EX5, I_EX5, uni(G_EX5), fixed_internal=EI_EX5)
    assert len(res.optima) == 6
    assert round(res.value, 5) == 0.80313
    # one outlink from node 4 of the class {3, 4}; node 5 has no internal links
    # and may leak to any nonempty part of V = {6, 7}
    expected = {frozenset({(4, b)}) | tail for b in (6, 7)
                for tail in ({(5, 6)}, {(5, 7)}, {(5, 6), (5, 7)})}
    assert {c.external_out for c in res.optima} == expected


def test_example12_optima():
    res = brute_force_optimum(G_EX12A, I_EX12, uni(G_EX12A))
    assert round(res.value, 3) == 0.926
    assert len(res.optima) == 2
    graphs = [c.graph(G_EX12A, I_EX12) for c in res.optima]
    assert G_EX12B in graphs
    z = RankingContext(C, np.array(Z_EX12))
    res = brute_force_optimum(G_EX12A, I_EX12, z)
    assert [c.graph(G_EX12A, I_EX12) for c in res.optima] == [G_EX12A]


def test_example14_target_optima():
    a = brute_force_target(G_EX14A, I_EX14, S_EX14, uni(G_EX14A))
    assert len(a.optima) == 1 and round(a.value, 5) == 0.48596
    assert a.checks == [{"shape_on_I": True, "strict_shape_on_I": False, "shape_on_S": True}]
    assert a.optima[0].graph(G_EX14A, I_EX14) == G_EX14A
    b = brute_force_target(G_EX14B, I_EX14, S_EX14, uni(G_EX14B))
    assert len(b.optima) == 1 and round(b.value, 5) == 0.82833
    assert b.checks[0]["shape_on_I"] is False and b.checks[0]["shape_on_S"] is True
    assert b.optima[0].graph(G_EX14B, I_EX14) == G_EX14B


def test_target_set_via_constraints():
    rules = StructureConstraints(target_set=S_EX14)
    res = brute_force_optimum(G_EX14A, I_EX14, uni(G_EX14A), rules)
    assert round(res.value, 5) == 0.48596 and res.checks
    with pytest.raises(InputError):
        brute_force_target(G_EX14A, I_EX14, {4}, uni(G_EX14A))


def test_target_whole_set_equals_optimum():
    for g, I, ctx in instance_family(5, 12):
        full = brute_force_optimum(g, I, ctx)
        target = brute_force_target(g, I, I, ctx)
        assert target.value == pytest.approx(full.value, abs=1e-12)


def test_second_evaluation_path_agrees():
    for g, I, ctx in instance_family(6, 20):
        res = brute_force_optimum(g, I, ctx)
        for cfg in res.optima:
            assert abs(evaluate_by_pagerank(g, I, cfg, ctx) - res.value) <= 1e-12


def test_optimum_dominates_sampled_configurations():
    rng = np.random.default_rng(7)
    for g, I, ctx in instance_family(8, 10):
        res = brute_force_optimum(g, I, ctx)
        configs = list(enumerate_admissible(g, I))
        assert len(configs) == res.count_enumerated
        for idx in rng.choice(len(configs), size=min(30, len(configs)), replace=False):
            cfg = configs[int(idx)]
            assert set_pagerank(cfg.graph(g, I), I, ctx) <= res.value + 1e-12


def test_gap_and_serialization():
    res = brute_force_optimum(G_EX12A, I_EX12, uni(G_EX12A))
    d = res.to_dict()
    assert d["tie_tolerance"] == 1e-12
    assert res.top2_gap is not None and res.top2_gap > 1e-12
    assert len(d["optima"]) == 2


def test_conjecture_probe():
    report = conjecture_probe(G_EX12A, I_EX12, uni(G_EX12A))
    assert report.rows and not report.counterexamples
    assert all(row["has_external_parent"] for row in report.rows)
    with pytest.raises(InapplicableError):
        conjecture_probe(G_EX12A, I_EX12, RankingContext(C, np.array(Z_EX12)))
    with pytest.raises(InapplicableError):
        conjecture_probe(WebGraph(3, frozenset({(2, 3), (3, 2)})), {1}, RankingContext.uniform(3))
