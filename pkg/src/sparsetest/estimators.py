"""Additive-error distance estimators built on size-weighted local sampling.

Each iteration draws a uniform node ``s`` and a range bound ``x`` with
``P(x >= b) = b**-2``, then asks whether ``s`` lies in a small structure
(component, 2-class-leaf, 3-class-leaf) of size ``b <= x``. Adding ``b``
when it does makes every small structure count ``1/n`` in expectation, so
``a * n / r`` estimates how many there are. A hard query budget turns the
expected cost into a worst-case cap; running out aborts the remaining
iterations, which then contribute nothing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .graph import QueryBudget
from .local import ThreeLeafClass, TwoLeafClass, one_set, one_two_leaf, one_two_three_leaf
from .parallel import run_chunks
from .sampling import RandomSource, rand_index, rand_range, range_bound, range_pmf


@dataclass(frozen=True)
class EstimatorConfig:
    delta: float
    p: float
    n: int

    def __post_init__(self):
        if not 0 < self.delta <= 1:
            raise ValueError("delta must be in (0, 1]")
        if not 0 < self.p < 1:
            raise ValueError("p must be in (0, 1)")
        if self.n < 1:
            raise ValueError("n must be >= 1")


@dataclass
class ComponentEstimate:
    value: float
    budget_exhausted: bool = False
    queries_used: int = 0
    budget: int = 0
    iterations: int = 0
    whole_graph: bool = False  # a counted component covered all n nodes


@dataclass
class TwoEcCensus:
    c1_hat: float
    c2_hat: float
    budget_exhausted: bool = False
    queries_used: int = 0
    budget: int = 0
    iterations: int = 0
    whole_graph: bool = False  # the whole graph was seen as one 2-edge-connected piece


@dataclass
class ThreeEcCensus:
    c0_hat: float
    c1_hat: float
    c2_hat: float
    c3_hat: float
    c4_hat: float = 0.0
    budget_exhausted: bool = False
    queries_used: int = 0
    budget: int = 0
    iterations: int = 0

    @property
    def phi3_hat(self) -> float:
        return 3 * self.c0_hat + 2 * self.c1_hat + self.c2_hat + self.c3_hat + self.c4_hat


@dataclass
class DistanceEstimate:
    absolute: float
    error_bound: float
    m: float | None = None  # edge count used for normalising, if known
    budget_exhausted: bool = False
    queries_used: int = 0
    budget: int = 0

    @property
    def normalized(self) -> float | None:
        return self.absolute / self.m if self.m else None


# ---------------------------------------------------------------- parameters


def one_sets_params(delta: float, p: float) -> tuple[int, int, int]:
    """``(r, ell, range bound)`` for component counting."""
    r = math.ceil(2 / ((1 - p) * delta ** 2) - 1e-9)
    ell = math.ceil(r * (math.log(2 / delta) + 4.5))
    return r, ell, range_bound(delta)


def two_leaves_params(delta: float, p: float) -> tuple[int, int, int]:
    r = math.ceil(7 / (2 * (1 - p) * delta ** 2) - 1e-9)
    ell = math.ceil(r * (3 * math.log(2 / delta) + 6))
    return r, ell, range_bound(delta)


def three_leaf_cost(x):
    """Worst-case queries of one 3-leaf classification with size bound ``x``.

    A search that discovers at most ``L`` nodes of a simple graph makes at
    most ``L**2`` queries. The classification runs three searches for up to
    ``x+1`` nodes and three more per tree edge of the first (at most ``x``).
    """
    x = np.asarray(x, dtype=float)
    return 3 * (x + 1) ** 3


@lru_cache(maxsize=None)
def _cost_moments(i: int) -> tuple[float, float]:
    pmf = range_pmf(i)
    k = three_leaf_cost(np.arange(1, i + 1))
    mean = float(pmf @ k)
    var = float(pmf @ (k - mean) ** 2)
    return mean, var


def three_leaves_params(delta: float, p: float) -> tuple[int, int, int]:
    """``(r, ell, range bound)`` for the 3-edge census.

    ``ell`` is the mean total cost plus three standard deviations scaled
    by ``1/sqrt(1-p)``; by Chebyshev the budget is hit with probability at
    most ``(1-p)/9``. Mean and variance are exact sums over the range
    distribution.
    """
    r = math.ceil(49 / (2 * (1 - p) * delta ** 2) - 1e-9)
    i = range_bound(delta)
    mean, var = _cost_moments(i)
    ell = math.ceil(r * mean + math.sqrt(9 * r * var / (1 - p)))
    return r, ell, i


# ---------------------------------------------------------------- sampling loop


def _sample_loop(oracle, n, r, i, rng: RandomSource, budget: QueryBudget, step, width, workers):
    """Run ``r`` iterations of ``step(oracle, s, x, budget)``.

    ``step`` returns a tuple of ``width`` integers, or None when the budget
    ran out during the call. Returns the summed tuple, whether the budget
    was exhausted and whether any step flagged the whole graph.
    """
    nodes = rand_index(rng.child(0), n, size=r)
    bounds = rand_range(rng.child(1), i, size=r)

    def body(orc, lo, hi, stop):
        acc = [0] * width
        exhausted = False
        for s, x in zip(nodes[lo:hi].tolist(), bounds[lo:hi].tolist()):
            if stop.is_set():
                break
            out = step(orc, s, x, budget)
            if out is None:
                exhausted = True
                stop.set()
                break
            for j in range(width):
                acc[j] += out[j]
        return acc, exhausted

    results = run_chunks(oracle, r, body, workers)
    total = [sum(res[0][j] for res in results) for j in range(width)]
    return total, any(res[1] for res in results) or budget.exhausted


def _scaled(a: int, n: int, r: int) -> Fraction:
    return Fraction(a * n, r)


# ---------------------------------------------------------------- components


def component_contribution(oracle, s, x, n, budget=None, even_only=False):
    """``(b, whole)`` for one iteration: ``b`` is the size of the component
    of ``s`` if it has at most ``x`` nodes (and, with ``even_only``, only
    even degrees), else 0; ``whole`` flags a component of all ``n`` nodes.
    None if the budget ran out."""
    budget = budget if budget is not None else QueryBudget(None)
    res = one_set(oracle, s, x + 1, budget)
    if res.exhausted:
        return None
    b = res.size
    if res.truncated or b > x:
        return (0, 0)
    if even_only:
        for v in res.visited:
            if not budget.try_consume():
                return None
            if oracle.degree(v) % 2:
                return (0, 0)
    return (b, int(b == n))


def one_sets(oracle, cfg: EstimatorConfig, rng: RandomSource, even_only: bool = False,
             workers: int = 1, enforce_budget: bool = True) -> ComponentEstimate:
    """Estimate the number of connected components (or of even ones).

    With ``even_only`` a small component counts only if every node in it
    has even degree; those degrees are queried again and charged to the
    budget.
    """
    n = cfg.n
    r, ell, i = one_sets_params(cfg.delta, cfg.p)
    budget = QueryBudget(ell if enforce_budget else None)
    start = oracle.queries_made

    def step(orc, s, x, bud):
        return component_contribution(orc, s, x, n, bud, even_only)

    (a, whole), exhausted = _sample_loop(oracle, n, r, i, rng, budget, step, 2, workers)
    value = _scaled(a, n, r) + Fraction(cfg.delta) * n / 4
    return ComponentEstimate(float(value), exhausted, oracle.queries_made - start, ell, r, whole > 0)


def dist1_estimate(oracle, cfg: EstimatorConfig, rng: RandomSource, workers: int = 1,
                   m: float | None = None) -> DistanceEstimate:
    """Edges needed to connect the graph: components minus one."""
    est = one_sets(oracle, cfg, rng, workers=workers)
    # a search that covered every node proves the graph connected
    absolute = 0.0 if est.whole_graph else max(0.0, est.value - 1)
    return DistanceEstimate(absolute, cfg.delta * cfg.n, m, est.budget_exhausted,
                            est.queries_used, est.budget)


# ---------------------------------------------------------------- 2-edge


def two_leaf_contribution(oracle, s, x, n, budget=None):
    """``(b1, b2, whole)``: the size of the 2-class-leaf of ``s`` (at most
    ``x`` nodes) in the slot of its kind, and a whole-graph flag."""
    res = one_two_leaf(oracle, s, x, budget)
    if res.exhausted:
        return None
    if res.kind is TwoLeafClass.LEAF_IS_COMPONENT:
        return (res.size, 0, int(res.size == n))
    if res.kind is TwoLeafClass.LEAF_BEHIND_BRIDGE:
        return (0, res.size, 0)
    return (0, 0, 0)


def one_two_leaves(oracle, cfg: EstimatorConfig, rng: RandomSource, workers: int = 1,
                   enforce_budget: bool = True) -> TwoEcCensus:
    """Estimate 2-class-leaves that are whole components (c1) and that hang
    off a bridge (c2)."""
    n = cfg.n
    r, ell, i = two_leaves_params(cfg.delta, cfg.p)
    budget = QueryBudget(ell if enforce_budget else None)
    start = oracle.queries_made

    def step(orc, s, x, bud):
        return two_leaf_contribution(orc, s, x, n, bud)

    (a1, a2, whole), exhausted = _sample_loop(oracle, n, r, i, rng, budget, step, 3, workers)
    return TwoEcCensus(float(_scaled(a1, n, r)), float(_scaled(a2, n, r)), exhausted,
                       oracle.queries_made - start, ell, r, whole > 0)


def dist2_estimate(census: TwoEcCensus, cfg: EstimatorConfig, m: float | None = None) -> DistanceEstimate:
    """Edges to add for 2-edge-connectivity: about ``c2/2 + c1``.

    The ``+1/2`` covers the ceiling and ``+delta*n/4`` recentres the
    truncation loss of large leaves.
    """
    bound = 0.5 + cfg.delta * cfg.n
    if census.whole_graph:
        absolute = 0.0
    else:
        absolute = census.c2_hat / 2 + 0.5 + census.c1_hat + cfg.delta * cfg.n / 4
    return DistanceEstimate(absolute, bound, m, census.budget_exhausted,
                            census.queries_used, census.budget)


# ---------------------------------------------------------------- 3-edge


def three_leaf_contribution(oracle, s, x, n, budget=None):
    """Sizes credited to ``(c0, c1, c2, c3, c4)`` for one iteration."""
    res = one_two_three_leaf(oracle, s, x, budget)
    if res.exhausted:
        return None
    out = [0, 0, 0, 0, 0]
    d = res.boundary
    if d is not None and res.size < n:
        out[d] += res.size
    if res.surplus_kind is not None and res.surplus_size < n:
        out[3 if res.surplus_kind == "component" else 4] += res.surplus_size
    return out


def one_two_three_leaves(oracle, cfg: EstimatorConfig, rng: RandomSource, workers: int = 1,
                         enforce_budget: bool = True) -> ThreeEcCensus:
    """Estimate the 3-edge census: 3-class-leaves by boundary degree (c0, c1,
    c2) and small 2-class-leaves with extra demand (c3 whole components, c4
    behind a bridge).

    A structure covering the whole graph is skipped: its demand is exactly
    cancelled by the top-level correction.
    """
    n = cfg.n
    r, ell, i = three_leaves_params(cfg.delta, cfg.p)
    budget = QueryBudget(ell if enforce_budget else None)
    start = oracle.queries_made

    def step(orc, s, x, bud):
        return three_leaf_contribution(orc, s, x, n, bud)

    acc, exhausted = _sample_loop(oracle, n, r, i, rng, budget, step, 5, workers)
    hats = [float(_scaled(a, n, r)) for a in acc]
    return ThreeEcCensus(*hats, budget_exhausted=exhausted,
                         queries_used=oracle.queries_made - start, budget=ell, iterations=r)


def dist3_estimate(census: ThreeEcCensus, cfg: EstimatorConfig, m: float | None = None) -> DistanceEstimate:
    """Edges to add for 3-edge-connectivity: ``ceil(phi3 / 2)``.

    ``+1/4`` centres the ceiling and ``+delta*n/4`` the truncation loss;
    the guaranteed bound is ``1/4 + delta*n``.
    """
    absolute = census.phi3_hat / 2 + 0.25 + cfg.delta * cfg.n / 4
    return DistanceEstimate(absolute, 0.25 + cfg.delta * cfg.n, m, census.budget_exhausted,
                            census.queries_used, census.budget)


# ---------------------------------------------------------------- eulerian


@dataclass(frozen=True)
class EulerConfig:
    epsilon: float
    p: float
    n: int
    d: float

    def __post_init__(self):
        if not 0 < self.epsilon <= 1:
            raise ValueError("epsilon must be in (0, 1]")
        if not 0 < self.p < 1:
            raise ValueError("p must be in (0, 1)")
        if self.n < 1 or self.d <= 0:
            raise ValueError("need n >= 1 and d > 0")

    @property
    def component_delta(self) -> float:
        # component error eps*d*n/2 keeps the total within eps*d*n
        return min(1.0, self.epsilon * self.d / 2)

    @property
    def odd_samples(self) -> int:
        return math.ceil(2 / ((1 - self.p) * (self.epsilon * self.d) ** 2) - 1e-9)


def euler_distance(oracle, cfg: EulerConfig, rng: RandomSource, workers: int = 1) -> DistanceEstimate:
    """Edge modifications to make the graph eulerian: ``C + U/2``.

    ``C`` counts components whose degrees are all even (each needs to be
    joined up), ``U`` counts odd-degree nodes (paired up by new edges).
    Each half gets failure probability ``(1-p)/2`` or less.
    """
    start = oracle.queries_made
    ccfg = EstimatorConfig(cfg.component_delta, (1 + cfg.p) / 2, cfg.n)
    comp = one_sets(oracle, ccfg, rng.child(0), even_only=True, workers=workers)
    k = cfg.odd_samples
    nodes = rand_index(rng.child(1), cfg.n, size=k)
    odd = sum(oracle.degree(s) % 2 for s in nodes.tolist())
    u = Fraction(odd * cfg.n, k)
    m = cfg.n * cfg.d / 2
    if comp.whole_graph:
        # the whole graph was seen as one even component: it is eulerian
        absolute = 0.0
    else:
        absolute = float(Fraction(comp.value) + u / 2)
    return DistanceEstimate(absolute, cfg.epsilon * cfg.d * cfg.n, m, comp.budget_exhausted,
                            oracle.queries_made - start, comp.budget + k)
