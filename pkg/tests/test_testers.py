import math

import numpy as np
import pytest

from sparsetest import exact
from sparsetest import generators as gen
from sparsetest.graph import Graph, counted_oracle
from sparsetest.sampling import RandomSource
from sparsetest.testers import (TesterConfig, euler_test, odd_degree_samples, read_graph,
                                run_tester, zshg_k)

# calibrated once on k-connected, disjoint-cycle, disjoint-clique and planted
# families (eps 0.05..0.3, p 0.5/0.9): worst ratio 203, k=3 on 3-edge-connected
# ladders at eps*d ~ 1.2; see query_reference
CEILING = 256.0


def query_reference(cfg):
    ed = cfg.epsilon * cfg.d
    factor = {1: 1.0, 2: 4.0, 3: 16.0 / ed}[cfg.k]
    return cfg.q * cfg.ell / ed ** 2 * factor


def rejection_rate(prop, g, eps, p, trials, seed=0):
    cfg = TesterConfig.for_graph(g, eps, p)
    return sum(not run_tester(prop, counted_oracle(g), cfg, RandomSource(seed).child(t))
               for t in range(trials)) / trials


def test_config_derivations():
    cfg = TesterConfig(0.1, 0.9, 2.0, 1000, k=3)
    assert cfg.q == pytest.approx(math.log(10))
    assert cfg.half_k == 2
    assert cfg.ell == math.ceil(math.log2(16 / 0.2))
    assert cfg.samples(1) == math.ceil(8 * cfg.q * 2 * cfg.ell / (2 * 0.2))
    # eps*d past 8*ceil(k/2): one round
    assert TesterConfig(1.0, 0.5, 20.0, 100).ell == 1


@pytest.mark.parametrize("kw", [dict(epsilon=0), dict(epsilon=1.5), dict(p=1.0), dict(p=0),
                                dict(d=-1), dict(k=4)])
def test_config_validation(kw):
    base = dict(epsilon=0.1, p=0.5, d=2.0, n=10, k=1)
    base.update(kw)
    with pytest.raises(ValueError):
        TesterConfig(**base)


def test_samples_monotone_in_p():
    for i in range(1, 6):
        m = [TesterConfig(0.1, p, 3.0, 10 ** 5, k=2).samples(i) for p in (0.3, 0.5, 0.75, 0.9, 0.99)]
        assert m == sorted(m)


def test_trivial_inputs():
    rs = RandomSource(0)
    assert not zshg_k(counted_oracle(Graph(0, [])), TesterConfig(0.1, 0.5, 0.0, 0), rs)
    assert zshg_k(counted_oracle(Graph(1, [])), TesterConfig(0.1, 0.5, 0.0, 1), rs)
    assert not zshg_k(counted_oracle(Graph(3, [])), TesterConfig(0.1, 0.5, 0.0, 3), rs)


@pytest.mark.parametrize("prop", ["conn", "2ec", "euler"])
def test_cycle_always_accepted(prop):
    g = Graph(10, [(i, (i + 1) % 10) for i in range(10)])
    assert rejection_rate(prop, g, 0.3, 0.9, 30) == 0


@pytest.mark.parametrize("k", [1, 2, 3])
def test_completeness_large(k, backend):
    rng = np.random.default_rng(k)
    for trial in range(4):
        g = gen.k_connected(1000, k, rng, extra=int(rng.integers(0, 500)))
        cfg = TesterConfig.for_graph(g, 0.2, 0.75, k)
        assert not cfg.small_n
        v = zshg_k(counted_oracle(g), cfg, RandomSource(trial))
        assert v.accept and v.witness is None


def test_soundness_disjoint_edges():
    g = gen.disjoint_edges(50)
    assert exact.relative_distance(exact.exact_census(g, False).distance_conn, g) >= 0.5
    assert rejection_rate("conn", g, 0.5, 0.9, 200) >= 0.9


def test_soundness_sampled_branch():
    # large enough to skip the exact branch
    g = gen.disjoint_cycles(500, 4, np.random.default_rng(0))
    cfg = TesterConfig.for_graph(g, 0.2, 0.75)
    assert not cfg.small_n
    rate = rejection_rate("conn", g, 0.2, 0.75, 200)
    assert rate >= 0.75 - 3 * math.sqrt(0.75 * 0.25 / 200)


def test_witness_is_a_real_cut():
    g = gen.barbells(300, 4, np.random.default_rng(0))
    cfg = TesterConfig.for_graph(g, 0.1, 0.9, 2)
    v = zshg_k(counted_oracle(g), cfg, RandomSource(1))
    assert not v.accept
    s, i, size = v.witness
    assert 1 <= i <= cfg.ell and size < 2 ** i


def test_euler_examples():
    star = Graph(10, [(0, j) for j in range(1, 10)])
    assert exact.relative_distance(exact.exact_euler_distance(star), star) >= 0.5
    assert rejection_rate("euler", star, 0.5, 0.9, 100) >= 0.9
    c5s = Graph(10, [(i, (i + 1) % 5) for i in range(5)] + [(5 + i, 5 + (i + 1) % 5) for i in range(5)])
    eps = exact.relative_distance(exact.exact_euler_distance(c5s), c5s)
    assert rejection_rate("euler", c5s, eps, 0.9, 100) >= 0.9


def test_odd_degree_samples():
    cfg = TesterConfig(0.5, 0.9, 1.8, 10)
    assert odd_degree_samples(cfg) == math.ceil(2 * math.log(10) / 0.9)


def test_euler_sampled_branch_catches_odd_nodes():
    # connected, many odd nodes: a cycle with chords between opposite nodes
    n = 4000
    edges = [(i, (i + 1) % n) for i in range(n)] + [(i, i + n // 2) for i in range(0, n // 2, 2)]
    g = Graph(n, edges)
    v = euler_test(counted_oracle(g), TesterConfig.for_graph(g, 0.1, 0.9), RandomSource(0))
    assert not v.accept and v.witness[1] == -1


def test_read_graph_round_trip():
    g = gen.random_gnm(12, 20, np.random.default_rng(2))
    o = counted_oracle(g)
    h = read_graph(o, g.n)
    assert sorted(map(sorted, h.edges)) == sorted(map(sorted, g.edges))
    assert o.queries_made == g.n + 2 * g.m


def test_parallel_matches_sequential():
    g = gen.planted_k_far("2ec", 3000, 0.05, np.random.default_rng(3))
    cfg = TesterConfig.for_graph(g, 0.05, 0.5, 2)
    for t in range(10):
        a = zshg_k(counted_oracle(g), cfg, RandomSource(t))
        b = zshg_k(counted_oracle(g), cfg, RandomSource(t), workers=3)
        assert a.accept == b.accept


@pytest.mark.parametrize("k", [1, 2, 3])
def test_query_ceiling(k):
    rng = np.random.default_rng(10 + k)
    graphs = [gen.k_connected(2000, k, rng, extra=800), gen.disjoint_cliques(300, 5, rng)]
    for g in graphs:
        for eps in (0.1, 0.3):
            cfg = TesterConfig.for_graph(g, eps, 0.75, k)
            if cfg.small_n:
                continue
            v = zshg_k(counted_oracle(g), cfg, RandomSource(0))
            assert v.queries_used <= CEILING * query_reference(cfg)
