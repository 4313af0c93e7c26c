"""Empirical measurements: query scaling, success rates, kernel speed."""
from __future__ import annotations

import math
import time

import numpy as np

from . import estimators as est
from . import exact, search
from .graph import Graph, counted_oracle
from .local import one_set, one_two_leaf, one_two_three_leaf
from .sampling import RandomSource, rand_index
from .testers import TesterConfig, run_tester

ESTIMATES = ("components", "dist1", "dist2", "dist3", "euler")


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    phat = successes / trials
    denom = 1 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def binomial_floor(p: float, trials: int, sigmas: float = 3.0) -> float:
    """``p - sigmas * sqrt(p(1-p)/trials)``: the pass line for a rate."""
    return p - sigmas * math.sqrt(p * (1 - p) / trials)


def loglog_slope(xs, ys) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    return float(np.polyfit(np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float)), 1)[0])


def truth(what: str, g: Graph, census=None) -> float:
    census = census or exact.exact_census(g, with_three=what == "dist3")
    return {"components": census.components, "dist1": census.distance_conn,
            "dist2": census.distance_2ec, "dist3": census.distance_3ec,
            "euler": census.distance_euler}[what]


def run_estimate(what: str, oracle, g_n: int, d: float, delta: float, p: float,
                 rng: RandomSource, workers: int = 1) -> est.DistanceEstimate:
    """One estimator run; for ``euler`` ``delta`` plays the role of epsilon."""
    res = _estimate(what, oracle, g_n, d, delta, p, rng, workers)
    res.m = g_n * d / 2
    return res


def _estimate(what, oracle, g_n, d, delta, p, rng, workers):
    if what == "euler":
        return est.euler_distance(oracle, est.EulerConfig(delta, p, g_n, d), rng, workers)
    cfg = est.EstimatorConfig(delta, p, g_n)
    if what == "components":
        c = est.one_sets(oracle, cfg, rng, workers=workers)
        return est.DistanceEstimate(c.value, delta * g_n, None, c.budget_exhausted,
                                    c.queries_used, c.budget)
    if what == "dist1":
        return est.dist1_estimate(oracle, cfg, rng, workers)
    if what == "dist2":
        return est.dist2_estimate(est.one_two_leaves(oracle, cfg, rng, workers), cfg)
    if what == "dist3":
        return est.dist3_estimate(est.one_two_three_leaves(oracle, cfg, rng, workers), cfg)
    raise ValueError(f"unknown estimate {what!r}")


def bench_scaling(what: str, deltas, p: float, g: Graph, trials: int, seed: int,
                  workers: int = 1) -> dict:
    """Mean/max queries and within-bound rate per delta, plus the log-log slope
    of max queries against ``1/delta``."""
    target = truth(what, g)
    rows = []
    for delta in deltas:
        queries, within, exhausted, budget = [], 0, 0, 0
        for t in range(trials):
            res = run_estimate(what, counted_oracle(g), g.n, g.average_degree, delta, p,
                               RandomSource(seed).child(t), workers)
            queries.append(res.queries_used)
            within += abs(res.absolute - target) <= res.error_bound
            exhausted += res.budget_exhausted
            budget = res.budget
        rows.append({"delta": delta, "budget": budget, "mean_queries": float(np.mean(queries)),
                     "max_queries": int(max(queries)), "within_rate": within / trials,
                     "exhausted": exhausted})
    slope = loglog_slope([1 / r["delta"] for r in rows], [r["max_queries"] for r in rows]) \
        if len(rows) > 1 else float("nan")
    return {"what": what, "truth": target, "rows": rows, "slope": slope}


def bench_failure(prop: str, epsilon: float, probs, g: Graph, trials: int, seed: int,
                  workers: int = 1) -> dict:
    """Rejection rate of the tester per target probability, with Wilson CIs."""
    rows = []
    for p in probs:
        cfg = TesterConfig.for_graph(g, epsilon, p)
        rejects = 0
        for t in range(trials):
            v = run_tester(prop, counted_oracle(g), cfg, RandomSource(seed).child(t), workers)
            rejects += not v.accept
        lo, hi = wilson_interval(rejects, trials)
        rows.append({"p": p, "reject_rate": rejects / trials, "ci_low": lo, "ci_high": hi,
                     "floor": binomial_floor(p, trials)})
    return {"property": prop, "epsilon": epsilon, "rows": rows}


def bench_kernels(g: Graph, limit: int, calls: int, seed: int = 0) -> dict:
    """Time the same searches under each available backend.

    Every backend sees the same start nodes; query totals must agree.
    """
    starts = rand_index(RandomSource(seed), g.n, size=calls).tolist()
    kernels = {
        "one_set": lambda o, s: one_set(o, s, limit),
        "one_two_leaf": lambda o, s: one_two_leaf(o, s, limit),
        "one_two_three_leaf": lambda o, s: one_two_three_leaf(o, s, min(limit, 16)),
    }
    saved = search.get_backend()
    out = {}
    try:
        for name, fn in kernels.items():
            out[name] = {}
            for backend in search.available_backends():
                search.set_backend(backend)
                oracle = counted_oracle(g)
                t0 = time.perf_counter()
                for s in starts:
                    fn(oracle, s)
                out[name][backend] = {"seconds": time.perf_counter() - t0,
                                      "queries": oracle.queries_made}
    finally:
        search.set_backend(saved)
    return out

