"""Bounded local explorations: k-set discovery and leaf classification.

Every function takes an oracle and a :class:`~sparsetest.graph.QueryBudget`;
all graph access goes through counted queries. The small induced subgraph
of a set found by a completed search is assembled from answers already
seen (no extra queries) and analysed in memory.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from . import exact
from .graph import Graph, QueryBudget
from .search import bounded_dfs, scan_available, two_leaf_scan


class TwoLeafClass(enum.Enum):
    LEAF_IS_COMPONENT = "component"
    LEAF_BEHIND_BRIDGE = "bridge"
    NOT_A_LEAF = "not_a_leaf"
    TOO_BIG = "too_big"


class ThreeLeafClass(enum.Enum):
    D0_LEAF = 0
    D1_LEAF = 1
    D2_LEAF = 2
    NOT_A_LEAF = "not_a_leaf"
    TOO_BIG = "too_big"


@dataclass
class SearchOutcome:
    size: int
    truncated: bool
    visited: frozenset
    tree_arcs: list = field(default_factory=list)
    exhausted: bool = False


@dataclass
class TwoLeafResult:
    kind: TwoLeafClass
    size: int = 0
    nodes: frozenset = frozenset()
    exhausted: bool = False

    @property
    def is_leaf(self) -> bool:
        return self.kind in (TwoLeafClass.LEAF_IS_COMPONENT, TwoLeafClass.LEAF_BEHIND_BRIDGE)


@dataclass
class ThreeLeafResult:
    kind: ThreeLeafClass
    size: int = 0
    nodes: frozenset = frozenset()
    # surplus channel: s lies in a small 2-class-leaf whose demand exceeds
    # the sum over the 3-class-leaves inside it (kind is "component" for a
    # two-leaf component, "bridge" for a one-leaf pendant block)
    surplus_kind: str | None = None
    surplus_size: int = 0
    exhausted: bool = False

    @property
    def boundary(self) -> int | None:
        return self.kind.value if isinstance(self.kind.value, int) else None


class _Probe:
    """One call's view of the oracle: budget, answer record, local assembly."""

    def __init__(self, oracle, budget):
        self.oracle = oracle
        self.budget = budget if budget is not None else QueryBudget(None)
        # the compiled path reads the in-memory graph directly, so answers
        # need no record; every read is of a slot some search already queried
        self.fast = scan_available(oracle)
        self.record = None if self.fast else {}
        self.exhausted = False

    def dfs(self, s, limit, forbid=None, allowed=None, omit=None):
        res = bounded_dfs(self.oracle, s, limit, self.budget, forbid, allowed, omit, self.record)
        if res.exhausted:
            self.exhausted = True
        return res

    def known_degree(self, v):
        if self.record is None:
            return self.oracle.graph.degree(v)
        return self.record[("deg", v)]

    def known_neighbor(self, v, i):
        # only called for slots a completed search already answered
        if self.record is None:
            g = self.oracle.graph
            return int(g.indices[g.indptr[v] + i])
        return self.record[(v, i)]

    def local_graph(self, nodes):
        """Induced multigraph on ``nodes`` plus one outside node ``O``.

        Every arc leaving ``nodes`` becomes an edge to ``O``, so boundary
        degrees of subsets are preserved.
        """
        order = sorted(nodes)
        idx = {v: j for j, v in enumerate(order)}
        outside = len(order)
        edges = []
        for v in order:
            jv = idx[v]
            for i in range(self.known_degree(v)):
                w = self.known_neighbor(v, i)
                jw = idx.get(w)
                if jw is None:
                    edges.append((jv, outside))
                elif jv < jw:
                    edges.append((jv, jw))
        return Graph(outside + 1, edges, multigraph=True), outside


def _cache(oracle):
    cache = getattr(oracle, "_local_cache", None)
    if cache is None:
        cache = {}
        try:
            oracle._local_cache = cache
        except AttributeError:
            pass
    return cache


# ---------------------------------------------------------------- 1-sets


def one_set(oracle, s, limit, budget=None) -> SearchOutcome:
    """Connected component of ``s`` if it has fewer than ``limit`` nodes."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    probe = _Probe(oracle, budget)
    res = probe.dfs(s, limit)
    return SearchOutcome(res.size, not res.complete, frozenset(res.order),
                         [(p, i) for p, i, _ in res.tree], res.exhausted)


# ---------------------------------------------------------------- 2-leaves


def _two_leaf(probe, s, r, omit=None, first=None) -> TwoLeafResult:
    first = first if first is not None else probe.dfs(s, r + 1, omit=omit)
    if first.exhausted:
        return TwoLeafResult(TwoLeafClass.TOO_BIG, exhausted=True)
    n1 = first.size
    second = probe.dfs(s, r + 1, forbid=first.tree_slots(), omit=omit)
    if second.exhausted:
        return TwoLeafResult(TwoLeafClass.TOO_BIG, exhausted=True)
    n2 = second.size
    if n1 == n2 == r + 1:
        return TwoLeafResult(TwoLeafClass.TOO_BIG)
    found = set(second.order)
    third = probe.dfs(s, n2 + 1, forbid=second.tree_slots(), allowed=found, omit=omit)
    if third.exhausted:
        return TwoLeafResult(TwoLeafClass.TOO_BIG, exhausted=True)
    n3 = third.size
    if n3 != n2 or third.boundary > 1:
        return TwoLeafResult(TwoLeafClass.NOT_A_LEAF, n2)
    kind = TwoLeafClass.LEAF_IS_COMPONENT if third.boundary == 0 else TwoLeafClass.LEAF_BEHIND_BRIDGE
    return TwoLeafResult(kind, n3, frozenset(found))


_KIND = {"component": TwoLeafClass.LEAF_IS_COMPONENT, "bridge": TwoLeafClass.LEAF_BEHIND_BRIDGE,
         "not_a_leaf": TwoLeafClass.NOT_A_LEAF, "too_big": TwoLeafClass.TOO_BIG}


def _scan(probe, s, r, per_edge):
    """Run the compiled scan; returns ``(base, leaves)`` like the Python path."""
    exhausted, kind, size, base_nodes, leaves = two_leaf_scan(
        probe.oracle, s, r, probe.budget, per_edge)
    leaves = [frozenset(a.tolist()) for a in leaves]
    if exhausted:
        probe.exhausted = True
    if kind == "exhausted":
        return TwoLeafResult(TwoLeafClass.TOO_BIG, exhausted=True), leaves
    nodes = leaves[0] if base_nodes is not None else frozenset()
    return TwoLeafResult(_KIND[kind], size, nodes, exhausted), leaves


def _two_leaf_top(probe, s, r) -> TwoLeafResult:
    if probe.fast:
        return _scan(probe, s, r, False)[0]
    return _two_leaf(probe, s, r)


def one_two_leaf(oracle, s, r, budget=None) -> TwoLeafResult:
    """Classify ``s`` against the 2-class-leaves of size at most ``r``.

    Three searches: a plain one for up to ``r+1`` nodes; a second that may
    not follow an arc of the first search tree from parent to child; and a
    third inside the second's node set that may not follow the second's
    tree arcs forward and counts arcs leaving the set. The set is a leaf
    when the third search covers it and at most one arc leaves it.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    return _two_leaf_top(_Probe(oracle, budget), s, r)


def two_set(oracle, s, limit, budget=None) -> SearchOutcome:
    """The 2-class-leaf containing ``s`` if it has fewer than ``limit`` nodes."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    if limit == 1:
        return SearchOutcome(1, True, frozenset([s]))
    res = _two_leaf_top(_Probe(oracle, budget), s, limit - 1)
    if res.is_leaf:
        return SearchOutcome(res.size, False, res.nodes, exhausted=res.exhausted)
    return SearchOutcome(limit, True, frozenset(), exhausted=res.exhausted)


# ---------------------------------------------------------------- 3-leaves


def _three_leaf_check(probe, nodes) -> int | None:
    """Boundary degree of ``nodes`` if it is a 3-class-leaf, else None."""
    cache = _cache(probe.oracle)
    key = ("leaf3", nodes)
    if key in cache:
        return cache[key]
    h, outside = probe.local_graph(nodes)
    d = h.degree(outside)
    result = None
    if d <= 2:
        result = d
        for w, dw in exact.small_cut_sets(h, 2).items():
            if outside not in w and len(w) < len(nodes) and dw <= 2:
                result = None
                break
    cache[key] = result
    return result


def _surplus(probe, leaf: TwoLeafResult):
    """Excess 3-edge demand of a small 2-class-leaf over its 3-class-leaves."""
    cache = _cache(probe.oracle)
    key = ("surplus", leaf.nodes)
    if key in cache:
        return cache[key]
    h, outside = probe.local_graph(leaf.nodes)
    ext = {w: d for w, d in exact.extreme_sets(h, 2).items() if outside not in w}
    fam = exact.LaminarFamily.build(ext)
    phi = fam.demand(3)
    full = frozenset(range(len(leaf.nodes)))
    excess = 0
    for i, w in enumerate(fam.sets):
        if w == full and fam.children[i]:
            excess = phi[i] - sum(phi[c] for c in fam.children[i])
    cache[key] = excess
    return excess


def _candidates(probe, s, r):
    """2-class-leaves around ``s`` in G and in G - e for each first-search
    tree edge e; returns ``(base, leaves)`` with ``base`` None if the first
    search ran out of budget."""
    if probe.fast:
        return _scan(probe, s, r, True)
    first = probe.dfs(s, r + 1)
    if first.exhausted:
        return None, []
    base = _two_leaf(probe, s, r, first=first)
    leaves = [base.nodes] if base.is_leaf else []
    for p, i, c in first.tree:
        if probe.exhausted:
            break
        res = _two_leaf(probe, s, r, omit=(p, i, c))
        if res.is_leaf:
            leaves.append(res.nodes)
    return base, leaves


def _three_leaf(probe, s, r):
    """Smallest verified 3-class-leaf of size <= r containing ``s``.

    Returns ``(nodes, boundary, first_two_leaf, any_candidate)``.
    """
    base, candidates = _candidates(probe, s, r)
    if base is None:
        return None, None, None, False
    seen = set()
    ordered = []
    for cand in sorted(candidates, key=len):
        if cand not in seen:
            seen.add(cand)
            ordered.append(cand)
    if probe.exhausted:
        return None, None, base, bool(ordered)
    for cand in ordered:
        d = _three_leaf_check(probe, cand)
        if d is not None:
            return cand, d, base, True
    return None, None, base, bool(ordered)


def three_set(oracle, s, limit, budget=None) -> SearchOutcome:
    """The 3-class-leaf containing ``s`` if it has fewer than ``limit`` nodes.

    A first search for up to ``limit`` nodes; then, with no edge and with
    each of its tree edges omitted in turn, a 2-class-leaf search. Each
    leaf found has boundary degree at most 2 in the full graph; the
    smallest one that is minimal (checked on its induced subgraph with
    boundary arcs kept) is the answer.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    if limit == 1:
        return SearchOutcome(1, True, frozenset([s]))
    probe = _Probe(oracle, budget)
    nodes, _, _, _ = _three_leaf(probe, s, limit - 1)
    if nodes is None:
        return SearchOutcome(limit, True, frozenset(), exhausted=probe.exhausted)
    return SearchOutcome(len(nodes), False, nodes, exhausted=probe.exhausted)


def one_two_three_leaf(oracle, s, r, budget=None) -> ThreeLeafResult:
    """Classify ``s`` for the 3-edge census with size bound ``r``.

    Phase one finds the 2-class-leaf of ``s`` (size <= r) and, from its
    induced subgraph, whether its demand exceeds that of the 3-class-leaves
    inside it. Phase two finds and verifies the 3-class-leaf of ``s`` and
    classifies it by boundary degree.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    probe = _Probe(oracle, budget)
    nodes, d, base, any_cand = _three_leaf(probe, s, r)
    if probe.exhausted:
        return ThreeLeafResult(ThreeLeafClass.TOO_BIG, exhausted=True)
    surplus_kind, surplus_size = None, 0
    if base is not None and base.is_leaf and len(base.nodes) > 1 and _surplus(probe, base) > 0:
        surplus_kind = base.kind.value
        surplus_size = base.size
    if nodes is None:
        kind = ThreeLeafClass.NOT_A_LEAF if any_cand else ThreeLeafClass.TOO_BIG
        return ThreeLeafResult(kind, surplus_kind=surplus_kind, surplus_size=surplus_size)
    return ThreeLeafResult(ThreeLeafClass(d), len(nodes), nodes, surplus_kind, surplus_size)
