import numpy as np
import pytest

from linkopt.engine import RankingContext, pagerank, visit_vector
from linkopt.errors import DanglingNodeError, InputError, NodeRangeError
from linkopt.fixtures import C2, C3, G_FIG2, I_FIG2
from linkopt.graph import WebGraph, parse_graph
from linkopt.sim import BLOCK, SimConfig, default_workers, simulate_return_time, simulate_visits, steps_for

C = 0.85


def uni(g):
    return RankingContext.uniform(g.n, C)


def within(res, exact, k=4.0):
    return abs(res.estimate - exact) <= k * res.stderr + 1e-12


def test_config_validation():
    with pytest.raises(InputError):
        SimConfig(0)
    with pytest.raises(InputError):
        SimConfig(10, seed=-1)
    with pytest.raises(InputError):
        SimConfig(10, max_steps=0)


def test_steps_for():
    k = steps_for(0.85)
    assert 0.85**k < 1e-12 <= 0.85 ** (k - 1)


def test_default_workers(monkeypatch):
    monkeypatch.setenv("LINKOPT_THREADS", "3")
    assert default_workers() == 3
    monkeypatch.setenv("LINKOPT_THREADS", "nope")
    assert default_workers() == 1


def test_deterministic_across_workers():
    trials = 3 * BLOCK + 17
    one = simulate_visits(G_FIG2, I_FIG2, uni(G_FIG2), 2, SimConfig(trials, seed=9, workers=1))
    four = simulate_visits(G_FIG2, I_FIG2, uni(G_FIG2), 2, SimConfig(trials, seed=9, workers=4))
    assert one == four
    r1 = simulate_return_time(C3, uni(C3), 1, SimConfig(2 * BLOCK + 5, seed=3, workers=1))
    r3 = simulate_return_time(C3, uni(C3), 1, SimConfig(2 * BLOCK + 5, seed=3, workers=3))
    assert r1 == r3


def test_seed_changes_estimate():
    a = simulate_visits(C3, {1}, uni(C3), 1, SimConfig(1000, seed=1))
    b = simulate_visits(C3, {1}, uni(C3), 1, SimConfig(1000, seed=2))
    assert a.estimate != b.estimate


def test_visits_whole_set():
    res = simulate_visits(C3, {1, 2, 3}, uni(C3), 2, SimConfig(200_000, seed=4))
    assert within(res, 1 / (1 - C))
    assert res.truncated_mass == 0.0


def test_visits_match_exact_c3():
    v = visit_vector(C3, {1}, uni(C3))
    for start in (1, 2, 3):
        res = simulate_visits(C3, {1}, uni(C3), start, SimConfig(200_000, seed=start))
        assert within(res, v[start - 1])


def test_visits_match_exact_fig2():
    v = visit_vector(G_FIG2, I_FIG2, uni(G_FIG2))
    for start in (2, 5, 6):
        res = simulate_visits(G_FIG2, I_FIG2, uni(G_FIG2), start, SimConfig(200_000, seed=10 + start))
        assert within(res, v[start - 1])


def test_return_times_cycles():
    for g, exact in ((C2, 2.0), (C3, 3.0)):
        res = simulate_return_time(g, uni(g), 1, SimConfig(200_000, seed=5))
        assert within(res, exact)


def test_return_time_random_personalization():
    g = WebGraph(4, frozenset({(1, 2), (1, 3), (2, 3), (3, 1), (3, 4), (4, 1)}))
    ctx = RankingContext(0.7, np.array([0.4, 0.3, 0.2, 0.1]))
    pi = pagerank(g, ctx)
    for i in (1, 4):
        res = simulate_return_time(g, ctx, i, SimConfig(200_000, seed=i))
        assert within(res, 1 / pi[i - 1])


def test_truncation_is_reported():
    res = simulate_visits(C3, {1}, uni(C3), 1, SimConfig(10_000, seed=6, max_steps=2))
    assert res.truncated_mass > 0.5


def test_bad_inputs():
    with pytest.raises(NodeRangeError):
        simulate_visits(C3, {1}, uni(C3), 4, SimConfig(10))
    with pytest.raises(DanglingNodeError):
        simulate_return_time(parse_graph("2\n1 2\n"), RankingContext.uniform(2), 1, SimConfig(10))
