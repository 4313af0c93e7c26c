"""One-sided property testers for k-edge-connectivity (k <= 3) and eulerianity.

A tester never rejects a graph that has the property: every rejection
carries a witness, a set of fewer than ``n`` nodes separated from the rest
by fewer than ``k`` edges, or a node of odd degree.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from . import exact
from .graph import Graph
from .local import one_set, three_set, two_set
from .parallel import run_chunks
from .sampling import RandomSource, rand_index

K_SET = {1: one_set, 2: two_set, 3: three_set}


@dataclass(frozen=True)
class TesterConfig:
    __test__ = False  # not a pytest class

    epsilon: float
    p: float
    d: float
    n: int
    k: int = 1

    def __post_init__(self):
        if not 0 < self.epsilon <= 1:
            raise ValueError("epsilon must be in (0, 1]")
        if not 0 < self.p < 1:
            raise ValueError("p must be in (0, 1)")
        if self.d < 0 or self.n < 0:
            raise ValueError("d and n must be non-negative")
        if self.k not in (1, 2, 3):
            raise ValueError("k must be 1, 2 or 3")

    @classmethod
    def for_graph(cls, g: Graph, epsilon, p, k=1) -> "TesterConfig":
        return cls(epsilon, p, g.average_degree, g.n, k)

    @property
    def q(self) -> float:
        return -math.log(1 - self.p)

    @property
    def half_k(self) -> int:
        return -(-self.k // 2)

    @property
    def ell(self) -> int:
        # eps*d >= 8*ceil(k/2) would give ell <= 0; one round with limit 2 instead
        return max(1, math.ceil(math.log2(8 * self.half_k / (self.epsilon * self.d))))

    def samples(self, i: int) -> int:
        return math.ceil(8 * self.q * self.half_k * self.ell / (2 ** i * self.epsilon * self.d))

    @property
    def small_n(self) -> bool:
        return self.n <= 8 * self.q * self.half_k * self.ell / (self.epsilon * self.d)


@dataclass
class TestVerdict:
    __test__ = False  # not a pytest class

    accept: bool
    queries_used: int = 0
    witness: tuple | None = None  # (node, round, set size); round 0 = exact branch
    exact: bool = False
    estimate: float | None = None  # tolerant testers: the distance estimate used

    def __bool__(self):
        return self.accept


def read_graph(oracle, n: int) -> Graph:
    """Read the whole graph through the oracle (every query counted)."""
    edges = []
    for v in range(n):
        for i in range(oracle.degree(v)):
            w = oracle.neighbor(v, i)
            if v < w:  # each edge once, from its lower endpoint
                edges.append((v, w))
    return Graph(n, edges, multigraph=True)


def _exact_branch(oracle, cfg: TesterConfig) -> TestVerdict:
    if cfg.k == 1:
        res = one_set(oracle, 0, cfg.n + 1)
        ok = res.size == cfg.n
        return TestVerdict(ok, witness=None if ok else (0, 0, res.size), exact=True)
    g = read_graph(oracle, cfg.n)
    ok = exact.is_k_edge_connected(g, cfg.k)
    return TestVerdict(ok, witness=None if ok else (0, 0, None), exact=True)


def zshg_k(oracle, cfg: TesterConfig, rng: RandomSource, workers: int = 1) -> TestVerdict:
    """Test k-edge-connectivity with distance parameter ``cfg.epsilon``.

    Round ``i`` samples ``m_i`` nodes and looks for a k-set of fewer than
    ``2**i`` nodes around each; the first one found is a witness.
    """
    start = oracle.queries_made
    n = cfg.n
    if n == 0:
        return TestVerdict(False)
    if cfg.d < 1:
        return TestVerdict(n == 1, oracle.queries_made - start)
    if cfg.small_n:
        v = _exact_branch(oracle, cfg)
        v.queries_used = oracle.queries_made - start
        return v
    search = K_SET[cfg.k]
    for i in range(1, cfg.ell + 1):
        limit = 2 ** i
        nodes = rand_index(rng.child(i), n, size=cfg.samples(i))

        def body(orc, lo, hi, stop, nodes=nodes, limit=limit, i=i):
            for s in nodes[lo:hi].tolist():
                if stop.is_set():
                    return None
                res = search(orc, s, limit)
                if not res.truncated and res.size < limit and res.size < n:
                    stop.set()
                    return (s, i, res.size)
            return None

        found = [w for w in run_chunks(oracle, len(nodes), body, workers) if w is not None]
        if found:
            return TestVerdict(False, oracle.queries_made - start, found[0])
    return TestVerdict(True, oracle.queries_made - start)


def odd_degree_samples(cfg: TesterConfig) -> int:
    return math.ceil(2 * cfg.q / (cfg.epsilon * cfg.d))


def euler_test(oracle, cfg: TesterConfig, rng: RandomSource, workers: int = 1) -> TestVerdict:
    """Connectivity at ``epsilon/2`` plus a search for odd-degree nodes.

    Both subtests run at the full success probability: a graph far from
    eulerian is far from connected or has many odd-degree nodes, and the
    matching subtest alone catches it.
    """
    start = oracle.queries_made
    conn = zshg_k(oracle, replace(cfg, epsilon=cfg.epsilon / 2, k=1), rng.child(0), workers)
    if not conn.accept or cfg.d < 1 or cfg.n <= 1:
        conn.queries_used = oracle.queries_made - start
        return conn
    nodes = rand_index(rng.child(1), cfg.n, size=odd_degree_samples(cfg))
    for s in nodes.tolist():
        deg = oracle.degree(s)
        if deg % 2:
            return TestVerdict(False, oracle.queries_made - start, (s, -1, deg))
    return TestVerdict(True, oracle.queries_made - start)


def run_tester(prop: str, oracle, cfg: TesterConfig, rng: RandomSource, workers: int = 1) -> TestVerdict:
    if prop == "euler":
        return euler_test(oracle, cfg, rng, workers)
    k = {"conn": 1, "2ec": 2, "3ec": 3}[prop]
    return zshg_k(oracle, replace(cfg, k=k), rng, workers)
