import numpy as np
import pytest

from linkopt.engine import (
    RankingContext,
    Solver,
    basic_absorbing,
    google_matrix,
    pagerank,
    parse_personalization,
    set_pagerank,
    transition_matrix,
    v_top_set,
    visit_block_identity_residual,
    visit_vector,
)
from linkopt.errors import ComplementEmptyError, DanglingNodeError, InputError
from linkopt.fixtures import C2, C3, CHAIN3, G_EX8, G_EX12A, G_EX12B, G_FIG2, I_EX8, I_EX12
from linkopt.graph import WebGraph, parse_graph, partition_links

from helpers import random_ctx, random_graph, random_subset

C = 0.85


def uni(g, c=C):
    return RankingContext.uniform(g.n, c)


def test_context_validation():
    with pytest.raises(InputError):
        RankingContext(1.0, np.ones(2) / 2)
    with pytest.raises(InputError):
        RankingContext(0.5, np.array([1.0, 0.0]))
    with pytest.raises(InputError):
        RankingContext(0.5, np.array([0.6, 0.6]))
    assert RankingContext.uniform(4).is_uniform()


def test_parse_personalization():
    z = parse_personalization("# z\n0.7\n0.1\n\n0.1\n0.1\n")
    assert np.allclose(z, [0.7, 0.1, 0.1, 0.1])
    with pytest.raises(InputError):
        parse_personalization("0.5\nabc\n")


def test_length_mismatch():
    with pytest.raises(InputError):
        pagerank(C3, RankingContext.uniform(4))


def test_dangling_rejected():
    with pytest.raises(DanglingNodeError):
        pagerank(parse_graph("2\n1 2\n"), RankingContext.uniform(2))


def test_pagerank_symmetric_cycles():
    assert np.allclose(pagerank(C2, uni(C2)), [0.5, 0.5], atol=1e-12)
    assert np.allclose(pagerank(C3, uni(C3)), [1 / 3] * 3, atol=1e-12)


def test_pagerank_is_left_perron_vector():
    rng = np.random.default_rng(1)
    for _ in range(20):
        g = random_graph(rng, int(rng.integers(2, 40)))
        ctx = random_ctx(rng, g.n, float(rng.choice([0.5, 0.85, 0.99])), uniform=False)
        pi = pagerank(g, ctx)
        G = google_matrix(g, ctx)
        assert np.abs(pi @ G - pi).sum() <= 1e-10
        assert abs(pi.sum() - 1) <= 1e-10
        assert (pi > 0).all()


def test_pagerank_normalization_property():
    rng = np.random.default_rng(2)
    for c in (0.5, 0.85, 0.99):
        for _ in range(30):
            g = random_graph(rng, int(rng.integers(1, 51)))
            assert abs(pagerank(g, uni(g, c)).sum() - 1) <= 1e-10


def test_visit_vector_whole_set():
    rng = np.random.default_rng(3)
    g = random_graph(rng, 15)
    for c in (0.3, 0.85):
        assert np.allclose(visit_vector(g, g.nodes, uni(g, c)), 1 / (1 - c), rtol=1e-12)


def test_visit_vector_c3_closed_form():
    v = visit_vector(C3, {1}, uni(C3))
    d = 1 - C**3
    assert np.allclose(v, [1 / d, C**2 / d, C / d], rtol=1e-12)
    assert np.allclose(v, [2.59151, 1.87236, 2.20278], atol=1e-5)


def test_visit_vector_fig2():
    v = visit_vector(G_FIG2, {1}, uni(G_FIG2))
    assert np.allclose(v[1:6], [4.359, 4.359, 4.359, 3.521, 3.492], atol=5e-4)


def test_visit_vector_solves_system():
    rng = np.random.default_rng(4)
    for _ in range(20):
        g = random_graph(rng, 25)
        I = random_subset(rng, g.n)
        v = visit_vector(g, I, uni(g))
        e = np.zeros(g.n)
        e[[i - 1 for i in I]] = 1
        assert np.allclose(v, C * transition_matrix(g) @ v + e, atol=1e-12)


def test_set_pagerank_examples():
    assert set_pagerank(C2, {1, 2}, uni(C2)) == pytest.approx(1.0, abs=1e-12)
    assert round(set_pagerank(G_EX8, I_EX8, uni(G_EX8)), 3) == 0.199
    assert round(set_pagerank(G_EX12B, I_EX12, uni(G_EX12B)), 3) == 0.926
    assert round(set_pagerank(G_EX12A, I_EX12, uni(G_EX12A)), 3) == 0.922


def test_set_pagerank_equals_pagerank_sum():
    rng = np.random.default_rng(5)
    for _ in range(50):
        g = random_graph(rng, int(rng.integers(2, 30)))
        ctx = random_ctx(rng, g.n, 0.85, uniform=False)
        I = random_subset(rng, g.n)
        pi = pagerank(g, ctx)
        ref = sum(pi[i - 1] for i in I)
        assert set_pagerank(g, I, ctx) == pytest.approx(ref, rel=1e-10)


def test_v_top_set_examples():
    assert v_top_set(G_FIG2, {1}, uni(G_FIG2)).nodes == {2, 3, 4}
    assert v_top_set(C3, {1}, uni(C3)).nodes == {3}
    g = WebGraph(4, frozenset({(1, 2), (2, 1), (3, 4), (4, 3), (1, 3)}))
    top = v_top_set(g, {1, 2}, uni(g))
    assert top.all_zero and top.nodes == {3, 4}
    with pytest.raises(ComplementEmptyError):
        v_top_set(C3, {1, 2, 3}, uni(C3))


def test_basic_absorbing():
    assert basic_absorbing(C3, {1}).edges == {(1, 1), (2, 3), (3, 1)}
    assert basic_absorbing(CHAIN3, {3}) == CHAIN3
    rng = np.random.default_rng(6)
    for _ in range(20):
        g = random_graph(rng, 12)
        I = random_subset(rng, 12)
        once = basic_absorbing(g, I)
        assert basic_absorbing(once, I) == once
        p, q = partition_links(g, I), partition_links(once, I)
        assert q.external_out == set() and q.internal == {(i, i) for i in I}
        assert q.external_in == p.external_in and q.external == p.external


def test_block_identity():
    assert visit_block_identity_residual(C3, {1}, uni(C3)) <= 1e-10
    assert visit_block_identity_residual(G_FIG2, {1}, uni(G_FIG2)) <= 1e-10
    assert visit_block_identity_residual(C3, {1, 2, 3}, uni(C3)) == 0.0
    rng = np.random.default_rng(7)
    for _ in range(30):
        g = random_graph(rng, 20)
        I = random_subset(rng, 20, high=19)
        assert visit_block_identity_residual(g, I, uni(g)) <= 1e-10


def test_iterative_solver_matches_dense():
    rng = np.random.default_rng(8)
    g = random_graph(rng, 60, density=0.1)
    I = random_subset(rng, 60)
    dense = Solver(g, C)
    sparse = Solver(g, C, dense_limit=10)
    assert not sparse.dense
    e = np.zeros(g.n)
    e[[i - 1 for i in I]] = 1
    assert np.allclose(sparse.solve(e), dense.solve(e), rtol=1e-10)
    b = RankingContext.uniform(g.n).z
    assert np.allclose(sparse.solve_transpose(b), dense.solve_transpose(b), rtol=1e-10)


def test_large_graph_uses_sparse_path():
    n = 3000
    edges = {(i, i % n + 1) for i in range(1, n + 1)} | {(i, (7 * i) % n + 1) for i in range(1, n + 1)}
    g = WebGraph(n, frozenset(edges))
    ctx = uni(g)
    pi = pagerank(g, ctx)
    assert abs(pi.sum() - 1) < 1e-10
    v = visit_vector(g, {1, 2, 3}, ctx)
    assert v.max() <= 1 / (1 - C) + 1e-9
    assert set_pagerank(g, {1, 2, 3}, ctx) == pytest.approx(pi[:3].sum(), rel=1e-9)
