"""Exact, desk-scale ground truth for every quantity the sublinear code estimates.

Nothing here is sublinear. Graphs are read directly, not through an oracle.
Multigraph semantics are used for augmentation: parallel edges may be added.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph

# ---------------------------------------------------------------- basics


def incidence(g: Graph) -> list[list[tuple[int, int]]]:
    """Per node, ``(neighbor, edge id)`` pairs in load order."""
    adj = [[] for _ in range(g.n)]
    for eid, (u, v) in enumerate(g.edges):
        adj[u].append((v, eid))
        adj[v].append((u, eid))
    return adj


def _reach(adj, start, skip=()):
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w, eid in adj[v]:
            if w not in seen and eid not in skip:
                seen.add(w)
                stack.append(w)
    return seen


def components(g: Graph, adj=None) -> list[list[int]]:
    adj = adj if adj is not None else incidence(g)
    seen = [False] * g.n
    out = []
    for s in range(g.n):
        if seen[s]:
            continue
        comp = sorted(_reach(adj, s))
        for v in comp:
            seen[v] = True
        out.append(comp)
    return out


def exact_components(g: Graph) -> int:
    return len(components(g))


def is_connected(g: Graph) -> bool:
    return g.n >= 1 and len(components(g)) == 1


def find_bridges(adj, nodes, skip=frozenset()) -> set[int]:
    """Edge ids of bridges among ``nodes`` (Tarjan lowlink, iterative).

    Edges in ``skip`` are treated as absent; parallel edges are never bridges.
    """
    disc, low = {}, {}
    bridges = set()
    t = 0
    for root in nodes:
        if root in disc:
            continue
        disc[root] = low[root] = t
        t += 1
        stack = [(root, -1, iter(adj[root]))]
        while stack:
            v, pe, it = stack[-1]
            for w, eid in it:
                if eid == pe or eid in skip:
                    continue
                if w in disc:
                    if disc[w] < low[v]:
                        low[v] = disc[w]
                else:
                    disc[w] = low[w] = t
                    t += 1
                    stack.append((w, eid, iter(adj[w])))
                    break
            else:
                stack.pop()
                if stack:
                    u = stack[-1][0]
                    if low[v] < low[u]:
                        low[u] = low[v]
                    if low[v] > disc[u]:
                        bridges.add(pe)
    return bridges


def two_edge_classes(g: Graph, adj=None) -> list[set[int]]:
    """2-edge-connected classes: components after deleting all bridges."""
    adj = adj if adj is not None else incidence(g)
    br = find_bridges(adj, range(g.n))
    seen = set()
    out = []
    for s in range(g.n):
        if s not in seen:
            cls = _reach(adj, s, br)
            seen |= cls
            out.append(cls)
    return out


def two_leaves(g: Graph) -> list[tuple[frozenset, str]]:
    """2-class-leaves as ``(nodes, kind)``; kind is ``"component"`` or ``"bridge"``.

    A connected component that is 2-edge-connected is one leaf of kind
    ``"component"``; otherwise the leaves are the 2-edge-connected classes
    incident to exactly one bridge.
    """
    adj = incidence(g)
    br = find_bridges(adj, range(g.n))
    cls_of = {}
    classes = two_edge_classes(g, adj)
    for idx, cls in enumerate(classes):
        for v in cls:
            cls_of[v] = idx
    bridge_count = [0] * len(classes)
    for eid in br:
        u, v = g.edges[eid]
        bridge_count[cls_of[u]] += 1
        bridge_count[cls_of[v]] += 1
    out = []
    for idx, cls in enumerate(classes):
        if bridge_count[idx] == 0:
            out.append((frozenset(cls), "component"))
        elif bridge_count[idx] == 1:
            out.append((frozenset(cls), "bridge"))
    return out


def exact_two_census(g: Graph) -> tuple[int, int]:
    """``(c1, c2)``: 2-edge-connected components, and leaves behind one bridge."""
    leaves = two_leaves(g)
    c1 = sum(kind == "component" for _, kind in leaves)
    return c1, len(leaves) - c1


def exact_distance_2ec(g: Graph) -> int:
    """Fewest edge insertions making ``g`` 2-edge-connected: ``ceil(c2/2) + c1``."""
    if g.n == 0:
        raise ValueError("empty graph")
    c1, c2 = exact_two_census(g)
    if c1 + c2 <= 1:
        return 0
    return -(-c2 // 2) + c1


def is_k_edge_connected(g: Graph, k: int) -> bool:
    if g.n == 0:
        return False
    adj = incidence(g)
    if len(_reach(adj, 0)) != g.n:
        return False
    if k <= 1:
        return True
    if find_bridges(adj, range(g.n)):
        return False
    if k == 2:
        return True
    if k == 3:
        return all(not find_bridges(adj, range(g.n), frozenset([e])) for e in range(g.m))
    raise ValueError("k must be 1, 2 or 3")


# ---------------------------------------------------------------- extreme sets


def small_cut_sets(g: Graph, max_cut: int = 2, adj=None) -> dict[frozenset, int]:
    """Every connected node set ``U`` with ``d(U) <= max_cut``, mapped to ``d(U)``.

    A connected ``U`` is a component of ``G - δ(U)``, so enumerating the
    components of ``G - F`` over all edge sets ``|F| <= max_cut`` that split
    something finds all of them. Works per connected component.
    """
    if max_cut > 2:
        raise ValueError("max_cut <= 2 supported")
    adj = adj if adj is not None else incidence(g)
    found: dict[frozenset, int] = {}
    for comp in components(g, adj):
        comp_set = frozenset(comp)
        found[comp_set] = 0
        if max_cut < 1 or len(comp) == 1:
            continue
        comp_edges = sorted({eid for v in comp for _, eid in adj[v]})

        def add(side):
            side = frozenset(side)
            for part in (side, comp_set - side):
                if part and part not in found:
                    d = sum((g.edges[e][0] in part) != (g.edges[e][1] in part) for e in comp_edges)
                    if d <= max_cut:
                        found[part] = d

        base_bridges = find_bridges(adj, comp)
        for b in base_bridges:
            add(_reach(adj, g.edges[b][0], {b}))
        if max_cut < 2:
            continue
        for e in comp_edges:
            for f in find_bridges(adj, comp, frozenset([e])):
                if f < e:
                    continue  # f bridges G-e iff e bridges G-f
                for end in (*g.edges[e], *g.edges[f]):
                    add(_reach(adj, end, {e, f}))
    return found


def extreme_sets(g: Graph, max_degree: int = 2, adj=None) -> dict[frozenset, int]:
    """Extreme sets ``U`` with ``d(U) <= max_degree``.

    ``U`` is extreme when every nonempty proper subset has strictly larger
    degree. It suffices to compare against connected subsets.
    """
    cand = small_cut_sets(g, max_degree, adj)
    items = sorted(cand.items(), key=lambda kv: len(kv[0]))
    out = {}
    for idx, (u, du) in enumerate(items):
        ok = True
        for w, dw in items[:idx]:
            if dw <= du and len(w) < len(u) and w < u:
                ok = False
                break
        if ok:
            out[u] = du
    return out


def extreme_sets_bruteforce(g: Graph, max_degree: int = 2) -> dict[frozenset, int]:
    """All-subsets version of :func:`extreme_sets` (``n <= 20``)."""
    n = g.n
    if n > 20:
        raise ValueError("brute force limited to n <= 20")
    if n == 0:
        return {}
    masks = np.arange(1 << n, dtype=np.int64)
    d = np.zeros(1 << n, dtype=np.int64)
    for u, v in g.edges:
        d += ((masks >> u) & 1) ^ ((masks >> v) & 1)
    big = np.int64(1 << 40)
    # submin[U] = min d(W) over nonempty W ⊆ U
    submin = d.copy()
    submin[0] = big
    for b in range(n):
        has = (masks >> b) & 1 == 1
        idx = masks[has]
        submin[idx] = np.minimum(submin[idx], submin[idx ^ (1 << b)])
    proper = np.full(1 << n, big, dtype=np.int64)
    for b in range(n):
        has = (masks >> b) & 1 == 1
        idx = masks[has]
        proper[idx] = np.minimum(proper[idx], submin[idx ^ (1 << b)])
    sel = np.nonzero((d <= max_degree) & (proper > d) & (masks > 0))[0]
    return {frozenset(v for v in range(n) if (int(m) >> v) & 1): int(d[m]) for m in sel}


@dataclass
class LaminarFamily:
    sets: list[frozenset]
    degree: list[int]
    parent: list[int]          # index of the smallest strict superset, -1 for roots
    children: list[list[int]]

    @classmethod
    def build(cls, ext: dict[frozenset, int]) -> "LaminarFamily":
        items = sorted(ext.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))
        sets = [s for s, _ in items]
        deg = [d for _, d in items]
        parent = [-1] * len(sets)
        for i, s in enumerate(sets):
            for j in range(i + 1, len(sets)):
                if s < sets[j]:
                    parent[i] = j
                    break
                if not s.isdisjoint(sets[j]) and not s <= sets[j]:
                    raise AssertionError("extreme sets are not laminar")
        children = [[] for _ in sets]
        for i, p in enumerate(parent):
            if p >= 0:
                children[p].append(i)
        return cls(sets, deg, parent, children)

    def demand(self, k: int) -> list[int]:
        phi = [0] * len(self.sets)
        for i in range(len(self.sets)):  # sorted by size: children first
            phi[i] = max(0, k - self.degree[i], sum(phi[c] for c in self.children[i]))
        return phi


def edge_demand(g: Graph, k: int, ext=None) -> int:
    """``Φ_k(V)`` by the recursion over the extreme-set laminar family.

    Roots of the family are the connected components. If the graph is
    connected its one root is ``V`` itself, whose demand is only the sum
    over its children.
    """
    if k not in (2, 3):
        raise ValueError("edge demand is implemented for k = 2, 3")
    if g.n == 0:
        return 0
    ext = ext if ext is not None else extreme_sets(g, k - 1)
    fam = LaminarFamily.build(ext)
    phi = fam.demand(k)
    roots = [i for i, p in enumerate(fam.parent) if p < 0]
    if len(roots) == 1 and len(fam.sets[roots[0]]) == g.n:
        return sum(phi[c] for c in fam.children[roots[0]])
    return sum(phi[i] for i in roots)


def edge_demand_subpartition(g: Graph, k: int) -> int:
    """``max Σ (k - d(X_i))`` over subpartitions of V into proper subsets.

    Independent route to ``Φ_k(V)`` via dynamic programming over bitmasks;
    ``n <= 12``.
    """
    n = g.n
    if n > 12:
        raise ValueError("subpartition DP limited to n <= 12")
    if n == 0:
        return 0
    full = (1 << n) - 1
    masks = np.arange(1 << n, dtype=np.int64)
    d = np.zeros(1 << n, dtype=np.int64)
    for u, v in g.edges:
        d += ((masks >> u) & 1) ^ ((masks >> v) & 1)
    deficiency = [max(0, k - int(x)) for x in d]
    deficiency[full] = 0
    deficiency[0] = 0
    best = [0] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        rest = mask ^ low
        val = best[rest]  # lowest node left uncovered
        sub = rest
        while True:
            s = sub | low
            cand = deficiency[s] + best[mask ^ s]
            if cand > val:
                val = cand
            if sub == 0:
                break
            sub = (sub - 1) & rest
        best[mask] = val
    return best[full]


@dataclass
class ThreeCensus:
    """Counts behind ``Φ_3``.

    c0, c1, c2: 3-class-leaves with boundary degree 0, 1, 2.
    c3: 2-edge-connected components containing exactly two 3-class-leaves.
    c4: 2-class-leaves behind a bridge whose only 3-class-leaf inside has
        boundary degree 2 (demand 2 instead of the leaf's 1).
    top: demand surplus of ``V`` itself when the graph is connected; it is
        counted by the census but not by ``Φ_3(V)``.
    """
    c0: int = 0
    c1: int = 0
    c2: int = 0
    c3: int = 0
    c4: int = 0
    top: int = 0

    @property
    def weighted(self) -> int:
        return 3 * self.c0 + 2 * self.c1 + self.c2 + self.c3 + self.c4

    @property
    def phi3(self) -> int:
        return self.weighted - self.top


def three_structure(g: Graph, ext=None):
    """Leaves and surplus sets of the 3-edge family.

    Returns ``(leaves, surplus, census)`` where ``leaves`` maps each
    3-class-leaf to its boundary degree and ``surplus`` maps each non-leaf
    extreme set with positive excess demand to its boundary degree.
    """
    ext = ext if ext is not None else extreme_sets(g, 2)
    fam = LaminarFamily.build(ext)
    phi = fam.demand(3)
    leaves, surplus = {}, {}
    census = ThreeCensus()
    for i, s in enumerate(fam.sets):
        d = fam.degree[i]
        if not fam.children[i]:
            leaves[s] = d
            setattr(census, f"c{d}", getattr(census, f"c{d}") + 1)
            continue
        excess = phi[i] - sum(phi[c] for c in fam.children[i])
        if excess:
            if excess != 1 or d == 2:
                raise AssertionError("unexpected surplus in 3-edge family")
            surplus[s] = d
            if d == 0:
                census.c3 += 1
            else:
                census.c4 += 1
    roots = [i for i, p in enumerate(fam.parent) if p < 0]
    if len(roots) == 1 and len(fam.sets[roots[0]]) == g.n:
        r = roots[0]
        census.top = phi[r] - sum(phi[c] for c in fam.children[r])
    return leaves, surplus, census


def exact_three_census(g: Graph) -> ThreeCensus:
    return three_structure(g)[2]


def phi3(g: Graph) -> int:
    return edge_demand(g, 3)


def exact_distance_3ec(g: Graph) -> int:
    if g.n == 0:
        raise ValueError("empty graph")
    return -(-edge_demand(g, 3) // 2)


# ---------------------------------------------------------------- eulerianity


def odd_degree_nodes(g: Graph) -> int:
    return int(np.count_nonzero(g.degrees() % 2))


def even_components(g: Graph) -> int:
    deg = g.degrees()
    return sum(all(deg[v] % 2 == 0 for v in comp) for comp in components(g))


def exact_euler_distance(g: Graph) -> int:
    """Fewest edge modifications to a connected graph with all degrees even.

    ``C + U/2`` (even-only components plus half the odd nodes), except that
    an already eulerian graph, ``C = 1`` and ``U = 0``, is at distance 0.
    """
    if g.n == 0:
        raise ValueError("empty graph")
    c, u = even_components(g), odd_degree_nodes(g)
    if c == 1 and u == 0:
        return 0
    return c + u // 2


# ---------------------------------------------------------------- exhaustive search


class _SmallMultigraph:
    """Edge-multiplicity vector over all node pairs of a tiny graph, with cut checks."""

    def __init__(self, n: int):
        self.n = n
        self.pairs = list(itertools.combinations(range(n), 2))
        self.pair_index = {p: i for i, p in enumerate(self.pairs)}
        # proper subsets containing node 0 represent every cut once
        subsets = [m for m in range(1, 1 << n) if m & 1 and m != (1 << n) - 1]
        cross = np.zeros((len(self.pairs), len(subsets)), dtype=np.int64)
        for i, (a, b) in enumerate(self.pairs):
            for j, m in enumerate(subsets):
                cross[i, j] = ((m >> a) & 1) ^ ((m >> b) & 1)
        self.cross = cross

    def weights(self, g: Graph) -> np.ndarray:
        w = np.zeros(len(self.pairs), dtype=np.int64)
        for u, v in g.edges:
            w[self.pair_index[(min(u, v), max(u, v))]] += 1
        return w

    def min_cut(self, w: np.ndarray) -> int:
        if self.n <= 1:
            return 1 << 30
        return int((w @ self.cross).min())

    def degrees(self, w: np.ndarray) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for i, (a, b) in enumerate(self.pairs):
            deg[a] += w[i]
            deg[b] += w[i]
        return deg


def augmentation_distance(g: Graph, k: int, max_edges: int = 12) -> int:
    """Fewest added edges (parallel edges allowed) making ``g`` k-edge-connected.

    Exhaustive iterative deepening over multisets of node pairs, pruned only
    by per-node degree deficiency. Deleting edges never raises edge
    connectivity, so insertions alone are optimal. ``n <= 7``.
    """
    n = g.n
    if n > 7:
        raise ValueError("exhaustive search limited to n <= 7")
    if n == 1:
        return 0
    sm = _SmallMultigraph(n)
    w0 = sm.weights(g)
    npairs = len(sm.pairs)
    pa = [a for a, _ in sm.pairs]
    pb = [b for _, b in sm.pairs]

    def search(w, deg, start, left):
        if left == 0:
            return sm.min_cut(w) >= k
        if sm.min_cut(w) >= k:
            return True
        need = sum(max(0, k - int(x)) for x in deg)
        if need > 2 * left:
            return False
        for p in range(start, npairs):
            w[p] += 1
            deg[pa[p]] += 1
            deg[pb[p]] += 1
            ok = search(w, deg, p, left - 1)
            w[p] -= 1
            deg[pa[p]] -= 1
            deg[pb[p]] -= 1
            if ok:
                return True
        return False

    deg0 = sm.degrees(w0)
    for t in range(max_edges + 1):
        if search(w0.copy(), deg0.copy(), 0, t):
            return t
    raise RuntimeError("augmentation search exceeded max_edges")


def euler_modification_distance(g: Graph, max_mods: int = 10) -> int:
    """Fewest insertions/deletions giving a connected multigraph with all degrees even.

    Exhaustive over deletion subsets and insertion multisets; ``n <= 7``.
    """
    n = g.n
    if n > 7:
        raise ValueError("exhaustive search limited to n <= 7")
    sm = _SmallMultigraph(n)
    w0 = sm.weights(g)
    npairs = len(sm.pairs)

    def eulerian(w):
        deg = sm.degrees(w)
        if np.any(deg % 2):
            return False
        return n == 1 or sm.min_cut(w) >= 1

    def add_search(w, start, left):
        if eulerian(w):
            return True
        if left == 0:
            return False
        odd = int(np.count_nonzero(sm.degrees(w) % 2))
        if odd > 2 * left:
            return False
        for p in range(start, npairs):
            w[p] += 1
            ok = add_search(w, p, left - 1)
            w[p] -= 1
            if ok:
                return True
        return False

    present = [p for p in range(npairs) for _ in range(int(w0[p]))]
    for t in range(max_mods + 1):
        for dels in range(0, min(t, len(present)) + 1):
            for chosen in set(itertools.combinations(present, dels)):
                w = w0.copy()
                for p in chosen:
                    w[p] -= 1
                if add_search(w, 0, t - dels):
                    return t
    raise RuntimeError("euler search exceeded max_mods")


# ---------------------------------------------------------------- census bundle


@dataclass
class ExactCensus:
    n: int
    m: int
    components: int
    even_components: int
    two_leaf_c1: int
    two_leaf_c2: int
    three: ThreeCensus = field(default_factory=ThreeCensus)
    odd_degree_nodes: int = 0

    @property
    def phi3(self) -> int:
        return self.three.phi3

    @property
    def distance_conn(self) -> int:
        return self.components - 1

    @property
    def distance_2ec(self) -> int:
        if self.two_leaf_c1 + self.two_leaf_c2 <= 1:
            return 0
        return -(-self.two_leaf_c2 // 2) + self.two_leaf_c1

    @property
    def distance_3ec(self) -> int:
        return -(-self.phi3 // 2)

    @property
    def distance_euler(self) -> int:
        if self.even_components == 1 and self.odd_degree_nodes == 0:
            return 0
        return self.even_components + self.odd_degree_nodes // 2

    def distance(self, prop: str) -> int:
        return {"conn": self.distance_conn, "2ec": self.distance_2ec,
                "3ec": self.distance_3ec, "euler": self.distance_euler}[prop]


def exact_census(g: Graph, with_three: bool = True) -> ExactCensus:
    c1, c2 = exact_two_census(g)
    three = exact_three_census(g) if with_three else ThreeCensus()
    return ExactCensus(g.n, g.m, exact_components(g), even_components(g), c1, c2,
                       three, odd_degree_nodes(g))


def relative_distance(distance: int, g: Graph) -> float:
    return distance / g.m if g.m else math.inf
