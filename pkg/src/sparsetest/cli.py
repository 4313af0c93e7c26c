"""Command-line front end.

Reports are ``key=value`` lines in a fixed order (or one JSON object with
``--json``). Exit status: 0 accept / within bound, 1 reject / out of bound,
2 usage error.
"""
from __future__ import annotations

import argparse
import ast
import json
import sys
import time

import numpy as np

from . import bench, exact, generators, search
from .graph import GraphFormatError, counted_oracle, load_graph, write_graph
from .sampling import RandomSource
from .testers import TesterConfig, run_tester
from .tolerant import PROPERTIES, ToleranceParams, tolerant_test


class UsageError(Exception):
    pass


def _prob(text):
    v = float(text)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError("must be in (0, 1)")
    return v


def _unit(text):
    v = float(text)
    if not 0 < v <= 1:
        raise argparse.ArgumentTypeError("must be in (0, 1]")
    return v


def _closed_unit(text):
    v = float(text)
    if not 0 <= v <= 1:
        raise argparse.ArgumentTypeError("must be in [0, 1]")
    return v


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _param(text):
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError("expected key=value")
    try:
        return key, ast.literal_eval(value)
    except (ValueError, SyntaxError):
        return key, value


def _float_list(text):
    try:
        vals = [float(x) for x in text.split(",") if x]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


class Report:
    """Ordered fields rendered as ``key=value`` lines or JSON."""

    def __init__(self, command: str):
        self.fields = {"command": command}

    def add(self, **kw):
        self.fields.update(kw)
        return self

    def render(self, as_json: bool) -> str:
        if as_json:
            return json.dumps(self.fields, default=_jsonable)
        return "\n".join(f"{k}={_fmt(v)}" for k, v in self.fields.items())


def _jsonable(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    return str(v)


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    if isinstance(v, (list, tuple)):
        return ",".join(_fmt(x) for x in v)
    return str(v)


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sparsetest", description="Sublinear-time connectivity tests and distance estimates for sparse graphs.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p, graph=True):
        if graph:
            p.add_argument("--graph", required=True, help="edge-list file: 'n m' header then 'u v' lines")
            p.add_argument("--multigraph", action="store_true", help="allow parallel edges")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=_positive_int, default=1)
        p.add_argument("--parallel", type=_positive_int, default=1, metavar="N",
                       help="worker threads per run (witness identity may differ from sequential)")
        p.add_argument("--backend", choices=["auto", "python", "ext"], default="auto")
        p.add_argument("--json", action="store_true", help="one JSON object instead of key=value lines")
        p.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identical reports)")

    p = sub.add_parser("test", help="one-sided property test")
    p.add_argument("--property", choices=PROPERTIES, required=True)
    p.add_argument("--epsilon", type=_unit, required=True)
    p.add_argument("--prob", type=_prob, required=True)
    common(p)

    p = sub.add_parser("estimate", help="additive distance estimate")
    p.add_argument("--what", choices=bench.ESTIMATES, required=True)
    p.add_argument("--delta", type=_unit, help="per-node error (epsilon for --what euler)")
    p.add_argument("--epsilon", type=_unit, help="alias of --delta for euler")
    p.add_argument("--prob", type=_prob, required=True)
    p.add_argument("--check", action="store_true", help="compare with the exact value; exit 1 if out of bound")
    common(p)

    p = sub.add_parser("tolerant", help="tolerant test: eps1-close vs eps2-far")
    p.add_argument("--property", choices=PROPERTIES, required=True)
    p.add_argument("--eps1", type=_closed_unit, required=True)
    p.add_argument("--eps2", type=_unit, required=True)
    p.add_argument("--prob", type=_prob, required=True)
    common(p)

    p = sub.add_parser("generate", help="write a generated graph")
    p.add_argument("--family", choices=generators.FAMILIES, required=True)
    p.add_argument("--param", type=_param, action="append", default=[], metavar="KEY=VALUE",
                   help="generator argument (repeatable), e.g. count=50")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("exact", help="exact census of a graph (desk scale)")
    p.add_argument("--what", choices=["census", "components", "2ec", "3ec", "euler"], default="census")
    p.add_argument("--graph", required=True)
    p.add_argument("--multigraph", action="store_true")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("bench", help="empirical scaling and success rates")
    bsub = p.add_subparsers(dest="bench", required=True)
    b = bsub.add_parser("scaling", help="max queries against 1/delta, log-log slope")
    b.add_argument("--what", choices=bench.ESTIMATES, required=True)
    b.add_argument("--deltas", type=_float_list, default=[0.4, 0.2, 0.1, 0.05])
    b.add_argument("--prob", type=_prob, required=True)
    _bench_graph(b)
    common(b, graph=False)
    b = bsub.add_parser("failure", help="tester rejection rates per p with Wilson CIs")
    b.add_argument("--property", choices=PROPERTIES, required=True)
    b.add_argument("--epsilon", type=_unit, required=True)
    b.add_argument("--probs", type=_float_list, default=[0.5, 0.75, 0.9])
    _bench_graph(b)
    common(b, graph=False)
    b = bsub.add_parser("kernels", help="compare the compiled and pure-Python search")
    b.add_argument("--limit", type=_positive_int, default=32)
    b.add_argument("--calls", type=_positive_int, default=1000)
    _bench_graph(b)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--json", action="store_true")
    return ap


def _bench_graph(b):
    src = b.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph")
    src.add_argument("--family", choices=generators.FAMILIES)
    b.add_argument("--param", type=_param, action="append", default=[], metavar="KEY=VALUE")
    b.add_argument("--multigraph", action="store_true")


# ---------------------------------------------------------------- commands


def _load(args):
    if getattr(args, "graph", None):
        return load_graph(args.graph, multigraph=getattr(args, "multigraph", False))
    spec = generators.GeneratorSpec(args.family, dict(args.param), args.seed)
    return spec.generate()


def _echo(args) -> str:
    skip = {"json", "timing", "backend"}
    parts = [args.cmd] + ([args.bench] if getattr(args, "bench", None) else [])
    for k, v in sorted(vars(args).items()):
        if k in skip or k in ("cmd", "bench") or v in (None, False, []):
            continue
        if k == "param":
            v = ",".join(f"{a}={b}" for a, b in v)
        parts.append(f"--{k}={_fmt(v)}")
    return " ".join(parts)


def _rng(args, t):
    base = RandomSource(args.seed)
    return base if args.trials == 1 else base.child(t)


def cmd_test(args, rep: Report) -> int:
    g = _load(args)
    cfg = TesterConfig.for_graph(g, args.epsilon, args.prob)
    verdicts = []
    for t in range(args.trials):
        verdicts.append(run_tester(args.property, counted_oracle(g), cfg, _rng(args, t), args.parallel))
    v = verdicts[0]
    rep.add(n=g.n, m=g.m, d=g.average_degree)
    if args.trials == 1:
        rep.add(verdict="accept" if v.accept else "reject", queries=v.queries_used,
                witness=v.witness, exact_branch=v.exact)
        return 0 if v.accept else 1
    rate = sum(x.accept for x in verdicts) / len(verdicts)
    q = [x.queries_used for x in verdicts]
    lo, hi = bench.wilson_interval(sum(not x.accept for x in verdicts), len(verdicts))
    rep.add(trials=args.trials, accept_rate=rate, reject_rate=1 - rate, reject_ci_low=lo,
            reject_ci_high=hi, mean_queries=float(np.mean(q)), max_queries=max(q))
    return 0 if rate >= 0.5 else 1


def cmd_estimate(args, rep: Report) -> int:
    delta = args.delta if args.delta is not None else args.epsilon
    if delta is None:
        raise UsageError("estimate needs --delta (or --epsilon for euler)")
    g = _load(args)
    if args.what == "euler" and g.average_degree <= 0:
        raise UsageError("euler estimate needs at least one edge")
    runs = [bench.run_estimate(args.what, counted_oracle(g), g.n, g.average_degree, delta,
                               args.prob, _rng(args, t), args.parallel)
            for t in range(args.trials)]
    target = bench.truth(args.what, g) if args.check else None
    r0 = runs[0]
    rep.add(n=g.n, m=g.m, what=args.what, delta=delta, prob=args.prob)
    if args.trials == 1:
        rep.add(estimate=r0.absolute, normalized=r0.normalized, error_bound=r0.error_bound,
                queries=r0.queries_used, budget=r0.budget, budget_exhausted=r0.budget_exhausted)
    else:
        vals = [r.absolute for r in runs]
        q = [r.queries_used for r in runs]
        rep.add(trials=args.trials, mean_estimate=float(np.mean(vals)), error_bound=r0.error_bound,
                mean_queries=float(np.mean(q)), max_queries=max(q), budget=r0.budget,
                exhausted_runs=sum(r.budget_exhausted for r in runs))
    if target is None:
        return 0
    within = [abs(r.absolute - target) <= r.error_bound for r in runs]
    rate = sum(within) / len(within)
    rep.add(exact=target, within_rate=rate)
    return 0 if rate >= args.prob or (args.trials == 1 and within[0]) else 1


def cmd_tolerant(args, rep: Report) -> int:
    if args.eps2 <= args.eps1:
        raise UsageError("need eps1 < eps2")
    g = _load(args)
    params = ToleranceParams(args.eps1, args.eps2, args.prob, g.average_degree, g.n)
    verdicts = [tolerant_test(counted_oracle(g), params, args.property, _rng(args, t), args.parallel)
                for t in range(args.trials)]
    v = verdicts[0]
    rep.add(n=g.n, m=g.m, threshold=params.threshold)
    if args.trials == 1:
        rep.add(verdict="accept" if v.accept else "reject", estimate=v.estimate, queries=v.queries_used)
        return 0 if v.accept else 1
    rate = sum(x.accept for x in verdicts) / len(verdicts)
    q = [x.queries_used for x in verdicts]
    rep.add(trials=args.trials, accept_rate=rate, mean_queries=float(np.mean(q)), max_queries=max(q))
    return 0 if rate >= 0.5 else 1


def cmd_generate(args, rep: Report) -> int:
    g = _load(args)
    write_graph(g, args.out)
    rep.add(family=args.family, n=g.n, m=g.m, out=args.out)
    return 0


def cmd_exact(args, rep: Report) -> int:
    g = load_graph(args.graph, multigraph=args.multigraph)
    with_three = args.what in ("census", "3ec")
    c = exact.exact_census(g, with_three=with_three)
    rep.add(n=g.n, m=g.m)
    if args.what == "census":
        t = c.three
        rep.add(components=c.components, even_components=c.even_components,
                two_leaf_c1=c.two_leaf_c1, two_leaf_c2=c.two_leaf_c2,
                three_census=[t.c0, t.c1, t.c2, t.c3, t.c4], phi3=c.phi3,
                odd_degree_nodes=c.odd_degree_nodes, distance_conn=c.distance_conn,
                distance_2ec=c.distance_2ec, distance_3ec=c.distance_3ec,
                distance_euler=c.distance_euler)
    else:
        prop = {"components": "conn"}.get(args.what, args.what)
        rep.add(distance=c.distance(prop), relative=exact.relative_distance(c.distance(prop), g))
    return 0


def cmd_bench(args, rep: Report) -> int:
    if args.bench == "kernels":
        g = _load(args)
        res = bench.bench_kernels(g, args.limit, args.calls, args.seed)
        for name, by in res.items():
            for backend, row in by.items():
                rep.fields[f"{name}.{backend}.seconds"] = row["seconds"]
                rep.fields[f"{name}.{backend}.queries"] = row["queries"]
        return 0
    g = _load(args)
    if args.bench == "scaling":
        res = bench.bench_scaling(args.what, args.deltas, args.prob, g, args.trials, args.seed,
                                  args.parallel)
        rep.add(n=g.n, m=g.m, truth=res["truth"])
        for j, row in enumerate(res["rows"]):
            rep.fields[f"row{j}"] = (f"delta:{row['delta']:g} budget:{row['budget']} mean:{row['mean_queries']:.1f} "
                               f"max:{row['max_queries']} within:{row['within_rate']:.3f} "
                               f"exhausted:{row['exhausted']}")
        rep.add(slope=res["slope"])
        return 0
    res = bench.bench_failure(args.property, args.epsilon, args.probs, g, args.trials,
                              args.seed, args.parallel)
    rep.add(n=g.n, m=g.m)
    ok = True
    for j, row in enumerate(res["rows"]):
        rep.fields[f"row{j}"] = (f"p:{row['p']:g} reject:{row['reject_rate']:.4f} "
                                         f"ci:[{row['ci_low']:.4f},{row['ci_high']:.4f}] "
                                         f"floor:{row['floor']:.4f}")
        ok = ok and row["reject_rate"] >= row["floor"]
    return 0 if ok else 1


COMMANDS = {"test": cmd_test, "estimate": cmd_estimate, "tolerant": cmd_tolerant,
            "generate": cmd_generate, "exact": cmd_exact, "bench": cmd_bench}


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "backend", "auto") != "auto":
        try:
            search.set_backend(args.backend)
        except RuntimeError as exc:
            ap.error(str(exc))
    rep = Report(_echo(args))
    if hasattr(args, "trials"):
        rep.add(seed=args.seed)
    t0 = time.perf_counter()
    try:
        code = COMMANDS[args.cmd](args, rep)
    except (UsageError, ValueError, GraphFormatError, OSError, TypeError) as exc:
        print(f"sparsetest: error: {exc}", file=sys.stderr)
        return 2
    if getattr(args, "timing", False):
        rep.add(wall_seconds=time.perf_counter() - t0)
    print(rep.render(getattr(args, "json", False)))
    return code


if __name__ == "__main__":
    sys.exit(main())
