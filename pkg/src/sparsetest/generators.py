"""Graph families with known exact census, for tests and benchmarks.

All generators return a :class:`Graph` whose node labels are randomly
permuted when an ``rng`` is given, so no algorithm can profit from a
convenient labelling.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import exact
from .graph import Graph

FAMILIES = ("isolated_nodes", "disjoint_cycles", "disjoint_cliques", "barbells",
            "planted_k_far", "random_gnm", "k_connected", "clique_ladder")


def _finish(n, edges, rng, multigraph=False):
    g = Graph(n, edges, multigraph=multigraph)
    return g.shuffled(rng) if rng is not None else g


def _cycle(nodes):
    k = len(nodes)
    if k == 2:
        return [(nodes[0], nodes[1])] * 2
    return [(nodes[a], nodes[(a + 1) % k]) for a in range(k)] if k > 2 else []


def _clique(nodes):
    return [(a, b) for j, a in enumerate(nodes) for b in nodes[j + 1:]]


def isolated_nodes(n: int, rng=None) -> Graph:
    return Graph(n, [])


def disjoint_cycles(count: int, length: int, rng=None) -> Graph:
    if length < 3:
        raise ValueError("cycles need length >= 3")
    edges = []
    for c in range(count):
        edges += _cycle(list(range(c * length, (c + 1) * length)))
    return _finish(count * length, edges, rng)


def disjoint_cliques(count: int, size: int, rng=None) -> Graph:
    if size < 1:
        raise ValueError("clique size must be >= 1")
    edges = []
    for c in range(count):
        edges += _clique(list(range(c * size, (c + 1) * size)))
    return _finish(count * size, edges, rng)


def disjoint_edges(count: int, rng=None) -> Graph:
    return disjoint_cliques(count, 2, rng)


def barbells(copies: int, size: int = 3, rng=None) -> Graph:
    """``copies`` disjoint pairs of ``K_size`` joined by one bridge each."""
    if size < 1:
        raise ValueError("bell size must be >= 1")
    edges = []
    for c in range(copies):
        base = 2 * size * c
        left = list(range(base, base + size))
        right = list(range(base + size, base + 2 * size))
        edges += _clique(left) + _clique(right) + [(left[0], right[0])]
    return _finish(2 * size * copies, edges, rng)


def random_gnm(n: int, m: int, rng) -> Graph:
    """Uniform simple graph with ``n`` nodes and ``m`` edges."""
    total = n * (n - 1) // 2
    if m > total:
        raise ValueError(f"G({n}, {m}) is infeasible")
    gen = _gen(rng)
    picks = gen.choice(total, size=m, replace=False) if m else np.empty(0, dtype=np.int64)
    # unrank pair index -> (u, v) with u < v
    edges = []
    for idx in np.sort(picks).tolist():
        u = int((2 * n - 1 - ((2 * n - 1) ** 2 - 8 * idx) ** 0.5) // 2)
        while u * (2 * n - u - 1) // 2 > idx:
            u -= 1
        while (u + 1) * (2 * n - u - 2) // 2 <= idx:
            u += 1
        v = idx - u * (2 * n - u - 1) // 2 + u + 1
        edges.append((u, int(v)))
    return Graph(n, edges)


def k_connected(n: int, k: int, rng, extra: int = 0) -> Graph:
    """Random ``k``-edge-connected simple graph (k in 1..3) plus ``extra`` chords.

    k=1: random recursive tree; k=2: Hamiltonian cycle; k=3: a prism or
    Moebius ladder (cycle plus antipodal chords, needs even n >= 4). Extra
    chords never reduce edge connectivity.
    """
    gen = _gen(rng)
    if k not in (1, 2, 3):
        raise ValueError("k must be 1, 2 or 3")
    if n < 1 or (k == 2 and n < 3) or (k == 3 and (n < 4 or n % 2)):
        raise ValueError(f"no simple {k}-edge-connected graph of this shape (n={n})")
    edges = set()
    if n == 1:
        return Graph(1, [])
    if k == 1:
        for v in range(1, n):
            edges.add((int(gen.integers(0, v)), v))
    else:
        edges.update((min(a, (a + 1) % n), max(a, (a + 1) % n)) for a in range(n))
        if k == 3:
            h = n // 2
            edges.update((a, a + h) for a in range(h))
    total = n * (n - 1) // 2
    extra = min(extra, total - len(edges))
    while extra > 0:
        u, v = (int(x) for x in gen.choice(n, size=2, replace=False))
        e = (min(u, v), max(u, v))
        if e not in edges:
            edges.add(e)
            extra -= 1
    return Graph(n, sorted(edges)).shuffled(gen)


def clique_ladder(sizes, copies=1, rng=None) -> Graph:
    """Disjoint cliques, ``copies`` of each size in ``sizes``.

    Dense pieces at several scales: searches inside a clique no larger than
    the range bound finish and scan every slot, which is what drives the
    cubic cost of the 3-edge census.
    """
    edges, base = [], 0
    for s in sizes:
        for _ in range(copies):
            edges += _clique(list(range(base, base + s)))
            base += s
    return _finish(base, edges, rng)


def planted_k_far(prop: str, n: int, eps: float, rng, piece: int = 2,
                  mode: str = "far") -> Graph:
    """A connected core with small pieces planted around it.

    The core is a 3-edge-connected ladder; pieces are disjoint ``K_piece``.
    With ``mode="far"`` the fewest pieces making the exact relative distance
    to ``prop`` at least ``eps`` are planted; with ``mode="close"`` the most
    pieces keeping it at most ``eps``. The distance is computed by the exact
    oracles, never assumed.
    """
    if prop not in ("conn", "2ec", "3ec", "euler"):
        raise ValueError(f"unknown property {prop!r}")
    if mode not in ("far", "close"):
        raise ValueError("mode must be 'far' or 'close'")
    gen = _gen(rng)

    def build(count):
        core = n - count * piece
        core -= core % 2
        edges = []
        if core >= 4:
            edges += _cycle(list(range(core)))
            if prop != "euler":
                edges += [(a, a + core // 2) for a in range(core // 2)]
        else:
            core = 0
        for c in range(count):
            edges += _clique(list(range(core + c * piece, core + (c + 1) * piece)))
        used = core + count * piece
        return Graph(used, edges)

    def rel(count):
        g = build(count)
        return exact.relative_distance(exact.exact_census(g, prop == "3ec").distance(prop), g)

    top = n // piece
    if mode == "far":
        lo, hi = 0, top
        if rel(hi) < eps:
            raise ValueError(f"cannot plant {eps}-far graph for {prop} with n={n}")
        while lo < hi:  # smallest count with rel >= eps (rel grows with count)
            mid = (lo + hi) // 2
            if rel(mid) >= eps:
                hi = mid
            else:
                lo = mid + 1
        g = build(lo)
    else:
        lo, hi = 0, top
        if rel(0) > eps:
            raise ValueError(f"cannot plant {eps}-close graph for {prop} with n={n}")
        while lo < hi:  # largest count with rel <= eps
            mid = (lo + hi + 1) // 2
            if rel(mid) <= eps:
                lo = mid
            else:
                hi = mid - 1
        g = build(lo)
    got = rel(lo)
    if (mode == "far" and got < eps) or (mode == "close" and got > eps):
        raise ValueError(f"planting failed for {prop}: relative distance {got:.3f}")
    return g.shuffled(gen)


def _gen(rng):
    if rng is None:
        raise ValueError("this generator needs an rng")
    return getattr(rng, "gen", rng)


@dataclass
class GeneratorSpec:
    family: str
    params: dict = field(default_factory=dict)
    seed: int | None = None

    def generate(self) -> Graph:
        return generate(self)


def generate(spec: GeneratorSpec) -> Graph:
    if spec.family not in FAMILIES:
        raise ValueError(f"unknown family {spec.family!r}; choose from {', '.join(FAMILIES)}")
    fn = globals()[spec.family]
    rng = np.random.default_rng(spec.seed) if spec.seed is not None else np.random.default_rng(0)
    return fn(**spec.params, rng=rng)
