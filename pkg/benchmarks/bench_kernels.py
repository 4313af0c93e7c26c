"""Compiled versus pure-Python search kernels.

    python3 benchmarks/bench_kernels.py [--n 20000] [--calls 2000] [--limit 32]

Runs the same searches from the same start nodes under every available
backend and prints time per call and the speedup. Query totals must match
across backends; the script exits 1 if they do not.
"""
import argparse
import sys

import numpy as np

from sparsetest import bench, generators as gen, search

FAMILIES = {
    "sparse random": lambda n, rng: gen.random_gnm(n, int(1.5 * n), rng),
    "3-connected ladder": lambda n, rng: gen.k_connected(n - n % 2, 3, rng, extra=n // 4),
    "clique ladder": lambda n, rng: gen.clique_ladder([5, 10, 20, 40], copies=max(1, n // 75), rng=rng),
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--calls", type=int, default=2000)
    ap.add_argument("--limit", type=int, default=32)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    backends = search.available_backends()
    print(f"backends: {', '.join(backends)}")
    if len(backends) < 2:
        print("compiled kernel not built; nothing to compare")
    ok = True
    for name, make in FAMILIES.items():
        g = make(args.n, np.random.default_rng(args.seed))
        res = bench.bench_kernels(g, args.limit, args.calls, args.seed)
        print(f"\n{name}: n={g.n} m={g.m} limit={args.limit} calls={args.calls}")
        for kernel, rows in res.items():
            cells = [f"{b} {1e6 * r['seconds'] / args.calls:8.1f} us/call" for b, r in rows.items()]
            if "ext" in rows and "python" in rows:
                cells.append(f"speedup {rows['python']['seconds'] / rows['ext']['seconds']:5.1f}x")
            queries = {r["queries"] for r in rows.values()}
            ok &= len(queries) == 1
            print(f"  {kernel:<20} " + "  ".join(cells) + f"  queries {'/'.join(map(str, queries))}")
    if not ok:
        print("query totals differ between backends", file=sys.stderr)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
