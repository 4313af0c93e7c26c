"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines. Seeds are
fixed, so every number printed is reproducible.
"""
import math
import subprocess
import sys

import networkx as nx
import numpy as np
import pytest

from sparsetest import bench, exact
from sparsetest import estimators as est
from sparsetest import generators as gen
from sparsetest.graph import Graph, counted_oracle, write_graph
from sparsetest.local import one_set, one_two_leaf, one_two_three_leaf, three_set, two_set
from sparsetest.sampling import RandomSource, rand_range
from sparsetest.testers import TesterConfig, run_tester, zshg_k
from sparsetest.tolerant import PROPERTIES, ToleranceParams, query_budget, tolerant_test

pytestmark = pytest.mark.acceptance

# criterion 4 is checked on every estimator and tolerant run in this file
BUDGET_LOG = {"runs": 0, "violations": 0}


def report(num, title, ok, detail=""):
    print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {num}: {title}" + (f" ({detail})" if detail else ""))
    assert ok, f"criterion {num} failed: {detail}"


def sigma_floor(p, trials):
    return p - 3 * math.sqrt(p * (1 - p) / trials)


def log_budget(queries, budget):
    BUDGET_LOG["runs"] += 1
    if queries > budget:
        BUDGET_LOG["violations"] += 1


def from_nx(G):
    G = nx.convert_node_labels_to_integers(G)
    return Graph(G.number_of_nodes(), list(G.edges()))


# ---------------------------------------------------------------- 1


def test_criterion_01_completeness():
    rng = np.random.default_rng(101)
    runs = rejected = 0
    for k in (1, 2, 3):
        for j in range(200):
            n = int(rng.integers(20, 1501))
            n += (k == 3 and n % 2)
            g = gen.k_connected(n, k, rng, extra=int(rng.integers(0, n)))
            for eps in (0.1, 0.3):
                for p in (0.5, 0.9):
                    cfg = TesterConfig.for_graph(g, eps, p, k)
                    v = zshg_k(counted_oracle(g), cfg, RandomSource(j).child(k))
                    runs += 1
                    rejected += not v.accept
    report(1, "perfect completeness of zshg_k, k=1..3", rejected == 0,
           f"{runs} runs on 600 graphs, {rejected} rejections")


# ---------------------------------------------------------------- 2


SOUNDNESS_FAMILIES = [
    ("conn", "1000 disjoint edges", lambda: gen.disjoint_edges(1000), 0.5),
    ("2ec", "300 disjoint triangles", lambda: gen.disjoint_cycles(300, 3), 0.3),
    ("3ec", "250 disjoint K4", lambda: gen.disjoint_cliques(250, 4), 0.25),
    ("euler", "300 disjoint triangles", lambda: gen.disjoint_cycles(300, 3), 0.3),
    # a large 3-edge-connected core with small pieces planted around it
    ("conn", "planted n=2000", lambda: gen.planted_k_far("conn", 2000, 0.1, np.random.default_rng(2)), 0.1),
    ("2ec", "planted n=1500", lambda: gen.planted_k_far("2ec", 1500, 0.1, np.random.default_rng(2)), 0.1),
    ("3ec", "planted n=600", lambda: gen.planted_k_far("3ec", 600, 0.1, np.random.default_rng(2)), 0.1),
    ("euler", "planted n=1500", lambda: gen.planted_k_far("euler", 1500, 0.1, np.random.default_rng(2)), 0.1),
]


def test_criterion_02_soundness():
    trials = 1000
    lines, ok = [], True
    for prop, name, make, eps in SOUNDNESS_FAMILIES:
        g = make()
        rel = exact.relative_distance(exact.exact_census(g, prop == "3ec").distance(prop), g)
        assert rel >= eps, (prop, rel)
        for p in (0.5, 0.75, 0.9):
            cfg = TesterConfig.for_graph(g, eps, p)
            assert not cfg.small_n
            rej = sum(not run_tester(prop, counted_oracle(g), cfg, RandomSource(7).child(t))
                      for t in range(trials))
            rate = rej / trials
            ok &= rate >= sigma_floor(p, trials)
            lines.append(f"{prop}/{name}/eps={eps}/p={p}: {rate:.3f}")
    report(2, "soundness on exactly eps-far families", ok, "; ".join(lines))


# ---------------------------------------------------------------- 3


def accuracy(what, g, delta, p, trials, seed):
    truth = bench.truth(what, g)
    hits = 0
    for t in range(trials):
        res = bench.run_estimate(what, counted_oracle(g), g.n, g.average_degree, delta, p,
                                 RandomSource(seed).child(t))
        log_budget(res.queries_used, res.budget)
        hits += abs(res.absolute - truth) <= res.error_bound
    return truth, hits / trials


def test_criterion_03_estimator_accuracy():
    trials = 1000
    cases = [
        ("components", "C500 (1 component)", Graph(500, [(j, (j + 1) % 500) for j in range(500)]), 0.2, 0.75),
        ("components", "50 x C10 (n/10)", gen.disjoint_cycles(50, 10, np.random.default_rng(1)), 0.2, 0.75),
        ("components", "500 isolated (n)", gen.isolated_nodes(500), 0.2, 0.75),
        ("dist2", "60 barbells", gen.barbells(60, 3, np.random.default_rng(2)), 0.3, 0.75),
        ("dist2", "100 triangles", gen.disjoint_cycles(100, 3), 0.3, 0.75),
        ("dist2", "2-edge-connected ring", gen.k_connected(300, 2, np.random.default_rng(3), extra=60), 0.3, 0.75),
        ("dist3", "60 x K4", gen.disjoint_cliques(60, 4), 0.4, 0.5),
        ("dist3", "40 x C6", gen.disjoint_cycles(40, 6), 0.4, 0.5),
        ("dist3", "K4-bridge-K4 x 30", Graph(240, [e for c in range(30) for e in
                                                 [(8 * c + a, 8 * c + b) for a in range(4) for b in range(a + 1, 4)]
                                                 + [(8 * c + 4 + a, 8 * c + 4 + b) for a in range(4) for b in range(a + 1, 4)]
                                                 + [(8 * c, 8 * c + 4)]]), 0.4, 0.5),
        ("euler", "80 x C5", gen.disjoint_cycles(80, 5), 0.3, 0.75),
        ("euler", "random G(300, 450)", gen.random_gnm(300, 450, np.random.default_rng(4)), 0.3, 0.75),
    ]
    lines, ok = [], True
    for what, name, g, delta, p in cases:
        truth, rate = accuracy(what, g, delta, p, trials, seed=31)
        ok &= rate >= sigma_floor(p, trials)
        lines.append(f"{what}/{name}: truth {truth}, within-bound {rate:.3f} (p={p})")
    report(3, "estimator accuracy within stated bounds", ok, "; ".join(lines))


# ---------------------------------------------------------------- 5


SCALING = [
    ("components", gen.isolated_nodes(2000), 0.5, 3, (1.8, 2.3)),
    ("dist2", gen.barbells(100, 3, np.random.default_rng(5)), 0.5, 3, (1.8, 2.3)),
    ("euler", gen.disjoint_cycles(100, 8, np.random.default_rng(6)), 0.5, 3, (1.8, 2.3)),
    ("dist3", gen.clique_ladder([5] * 1 + [10] * 2 + [20] * 4 + [40] * 8, rng=np.random.default_rng(7)),
     0.5, 2, (2.8, 3.3)),
]


def test_criterion_05_scaling():
    deltas = [0.4, 0.2, 0.1, 0.05]
    lines, ok = [], True
    for what, g, p, trials, (lo, hi) in SCALING:
        out = bench.bench_scaling(what, deltas, p, g, trials, seed=11)
        for row in out["rows"]:
            log_budget(row["max_queries"], row["budget"])
        ok &= lo <= out["slope"] <= hi
        lines.append(f"{what}: slope {out['slope']:.2f} in [{lo}, {hi}]")
    report(5, "query scaling against 1/delta", ok, "; ".join(lines))


# ---------------------------------------------------------------- 6


def graphs_up_to_8():
    atlas = [G for G in nx.graph_atlas_g() if G.number_of_nodes() >= 1]
    yield from atlas
    buckets = {}
    for G in atlas:
        if G.number_of_nodes() != 7:
            continue
        for mask in range(128):
            H = G.copy()
            H.add_node(7)
            H.add_edges_from((7, v) for v in range(7) if mask >> v & 1)
            key = nx.weisfeiler_lehman_graph_hash(H, iterations=3)
            seen = buckets.setdefault(key, [])
            if not any(nx.is_isomorphic(H, K) for K in seen):
                seen.append(H)
                yield H


def random_graphs_up_to_40(count, rng):
    """Mixed random multigraphs and block graphs (small dense pieces joined by
    few edges), so every leaf kind occurs."""
    for j in range(count):
        n = int(rng.integers(2, 41))
        if j % 2:
            m = int(rng.integers(0, 2 * n + 1))
            edges = [tuple(int(x) for x in rng.choice(n, 2, replace=False)) for _ in range(m)]
            yield Graph(n, edges, multigraph=True)
            continue
        edges, base = [], 0
        blocks = []
        while base < n:
            size = min(n - base, int(rng.integers(1, 7)))
            nodes = list(range(base, base + size))
            blocks.append(nodes)
            for a in nodes:
                for b in nodes:
                    if a < b and rng.random() < 0.7:
                        edges.append((a, b))
            base += size
        for _ in range(int(rng.integers(0, len(blocks) + 2))):
            a, b = rng.choice(len(blocks), 2) if len(blocks) > 1 else (0, 0)
            if a != b:
                edges.append((int(rng.choice(blocks[a])), int(rng.choice(blocks[b]))))
        yield Graph(n, edges, multigraph=True).shuffled(rng)


def disagreements(g):
    comp = {v: frozenset(c) for c in exact.components(g) for v in c}
    two = {v: (s, k) for s, k in exact.two_leaves(g) for v in s}
    leaves, _, _ = exact.three_structure(g)
    three = {v: (s, d) for s, d in leaves.items() for v in s}
    bad = 0
    n = g.n
    for s in range(n):
        bad += one_set(counted_oracle(g), s, n + 1).visited != comp[s]
        res = two_set(counted_oracle(g), s, n + 1)
        bad += (None if res.truncated else res.visited) != (two[s][0] if s in two else None)
        res = three_set(counted_oracle(g), s, n + 1)
        bad += (None if res.truncated else res.visited) != (three[s][0] if s in three else None)
        res = one_two_leaf(counted_oracle(g), s, n)
        bad += (res.kind.value if res.is_leaf else None) != (two[s][1] if s in two else None)
        res = one_two_three_leaf(counted_oracle(g), s, n)
        bad += res.boundary != (three[s][1] if s in three else None)
    return bad


def test_criterion_06_oracle_equivalence():
    small = bad_small = 0
    for G in graphs_up_to_8():
        small += 1
        bad_small += disagreements(from_nx(G))
    rng = np.random.default_rng(606)
    bad_random = sum(disagreements(g) for g in random_graphs_up_to_40(500, rng))
    report(6, "local searches agree with exact oracles", small == 1252 + 12346 and bad_small + bad_random == 0,
           f"{small} graphs with <= 8 nodes: {bad_small} disagreements; "
           f"500 random graphs <= 40 nodes: {bad_random}")


# ---------------------------------------------------------------- 7


def test_criterion_07_formula_vs_search():
    checked = bad = 0
    for G in nx.graph_atlas_g()[1:209]:
        g = from_nx(G)
        c = exact.exact_census(g)
        checked += 1
        bad += c.distance_2ec != exact.augmentation_distance(g, 2)
        bad += c.distance_3ec != exact.augmentation_distance(g, 3)
        bad += c.distance_euler != exact.euler_modification_distance(g)
    report(7, "distance formulas match exhaustive augmentation", bad == 0 and checked == 208,
           f"{checked} graphs with <= 6 nodes, 3 formulas each, {bad} disagreements")


# ---------------------------------------------------------------- 8


def test_criterion_08_tolerant():
    trials, p = 1000, 0.75
    lines, ok = [], True
    for prop in PROPERTIES:
        for e1, e2 in ((0.05, 0.5), (0.1, 0.9)):
            for mode, eps in (("close", e1), ("far", e2)):
                g = gen.planted_k_far(prop, 400, eps, np.random.default_rng(8), mode=mode)
                rel = exact.relative_distance(exact.exact_census(g, prop == "3ec").distance(prop), g)
                assert rel <= e1 if mode == "close" else rel >= e2
                par = ToleranceParams(e1, e2, p, g.average_degree, g.n)
                cap = query_budget(par, prop)
                right = 0
                for t in range(trials):
                    v = tolerant_test(counted_oracle(g), par, prop, RandomSource(88).child(t))
                    log_budget(v.queries_used, cap)
                    right += v.accept == (mode == "close")
                rate = right / trials
                ok &= rate >= sigma_floor(p, trials)
                lines.append(f"{prop} ({e1},{e2}) {mode} rel={rel:.3f}: {rate:.3f}")
    report(8, "tolerant testers decide correctly", ok, "; ".join(lines))


# ---------------------------------------------------------------- 9


def test_criterion_09_rand_range_tails():
    draws = 10 ** 6
    j = rand_range(RandomSource(909), 32, size=draws)
    lines, ok = [], True
    for x in (1, 2, 4, 8, 16):
        target = x ** -2.0
        freq = float((j >= x).mean())
        sd = math.sqrt(target * (1 - target) / draws)
        ok &= abs(freq - target) <= 4 * sd
        lines.append(f"x={x}: {freq:.6f} vs {target:.6f}")
    report(9, "rand_range tail frequencies within 4 sigma", ok, "; ".join(lines))


# ---------------------------------------------------------------- 10


def cli(*argv):
    out = subprocess.run([sys.executable, "-m", "sparsetest.cli", *argv],
                         capture_output=True, check=False)
    assert out.returncode in (0, 1) and out.stdout, out.stderr.decode()
    return out.stdout


def test_criterion_10_determinism(tmp_path):
    g = gen.planted_k_far("2ec", 600, 0.1, np.random.default_rng(10))
    path = tmp_path / "g.txt"
    write_graph(g, path)
    commands = [
        ("test", "--property", "3ec", "--epsilon", "0.1", "--prob", "0.75", "--trials", "20"),
        ("estimate", "--what", "dist3", "--delta", "0.4", "--prob", "0.5", "--trials", "3"),
        ("tolerant", "--property", "euler", "--eps1", "0.05", "--eps2", "0.5", "--prob", "0.75",
         "--trials", "5", "--parallel", "2"),
    ]
    identical = all(cli(*c, "--graph", str(path), "--seed", "5") ==
                    cli(*c, "--graph", str(path), "--seed", "5") for c in commands)

    # parallel versus sequential on a graph near the tolerant threshold,
    # where the accept rate is neither 0 nor 1
    mid = gen.planted_k_far("conn", 400, 0.26, np.random.default_rng(11), mode="close")
    par = ToleranceParams(0.05, 0.5, 0.75, mid.average_degree, mid.n)
    trials = 1000
    seq = [tolerant_test(counted_oracle(mid), par, "conn", RandomSource(12).child(t)).accept
           for t in range(trials)]
    thr = [tolerant_test(counted_oracle(mid), par, "conn", RandomSource(12).child(t), workers=3).accept
           for t in range(trials)]
    a, b = float(np.mean(seq)), float(np.mean(thr))
    pooled = (a + b) / 2
    tol = 3 * math.sqrt(max(pooled * (1 - pooled), 1 / trials) * 2 / trials)
    report(10, "deterministic reports and parallel agreement", identical and abs(a - b) <= tol,
           f"byte-identical CLI reports: {identical}; accept rate sequential {a:.3f}, "
           f"parallel {b:.3f}, tolerance {tol:.3f}, per-trial mismatches "
           f"{sum(x != y for x, y in zip(seq, thr))}")


# ---------------------------------------------------------------- 4


def test_criterion_04_budgets():
    # the pseudocode budget formulas, then a sweep over many configurations;
    # runs logged by the criteria above are included in the count
    formula_ok = True
    for delta in (0.05, 0.1, 0.3, 1.0):
        for p in (0.5, 0.9):
            r1, l1, _ = est.one_sets_params(delta, p)
            r2, l2, _ = est.two_leaves_params(delta, p)
            formula_ok &= l1 == math.ceil(r1 * (math.log(2 / delta) + 4.5))
            formula_ok &= l2 == math.ceil(r2 * (3 * math.log(2 / delta) + 6))
    rng = np.random.default_rng(404)
    for t in range(60):
        n = int(rng.integers(50, 400))
        g = gen.random_gnm(n, int(rng.integers(0, 2 * n)), rng)
        if g.m == 0:
            continue
        delta = float(rng.choice([0.3, 0.5, 1.0]))
        cfg = est.EstimatorConfig(delta, 0.5, g.n)
        for fn in (est.one_sets, est.one_two_leaves, est.one_two_three_leaves):
            o = counted_oracle(g)
            res = fn(o, cfg, RandomSource(t))
            log_budget(o.queries_made, res.budget)
        res = est.euler_distance(counted_oracle(g), est.EulerConfig(0.3, 0.5, g.n, g.average_degree),
                                 RandomSource(t))
        log_budget(res.queries_used, res.budget)
    report(4, "hard query budgets", formula_ok and BUDGET_LOG["violations"] == 0,
           f"pseudocode budget formulas {'match' if formula_ok else 'differ'}; "
           f"{BUDGET_LOG['runs']} runs, {BUDGET_LOG['violations']} violations")
