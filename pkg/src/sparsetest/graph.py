"""In-memory graphs, the query oracle, query budgets and edge-list I/O.

Sublinear algorithms in this package only ever touch a graph through a
:class:`GraphOracle`: ``degree(v)`` and ``neighbor(v, i)`` are the two
queries of the incidence-lists model and each one is counted.
``node_count()`` is free because the model allows uniform node sampling.
"""
from __future__ import annotations

import threading
from contextlib import contextmanager
from pathlib import Path
from typing import Iterable

import numpy as np

__all__ = [
    "Graph",
    "GraphFormatError",
    "GraphOracle",
    "CountedOracle",
    "QueryBudget",
    "load_graph",
    "write_graph",
    "boundary_degree",
    "counted_oracle",
]


class GraphFormatError(ValueError):
    pass


class Graph:
    """Immutable undirected graph stored as CSR incidence lists.

    Neighbor order is insertion order: for edge ``(u, v)`` number ``j`` in
    the edge list, ``v`` is appended to ``u``'s list and ``u`` to ``v``'s.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]], multigraph: bool = False):
        if n < 0:
            raise GraphFormatError("node count must be non-negative")
        edge_list = [(int(u), int(v)) for u, v in edges]
        seen = set()
        for u, v in edge_list:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphFormatError(f"self-loop at node {u}")
            if not multigraph:
                key = (u, v) if u < v else (v, u)
                if key in seen:
                    raise GraphFormatError(f"duplicate edge ({u}, {v})")
                seen.add(key)
        self.n = n
        self.multigraph = multigraph
        self.edges = edge_list
        self.m = len(edge_list)

        deg = np.zeros(n + 1, dtype=np.int64)
        for u, v in edge_list:
            deg[u + 1] += 1
            deg[v + 1] += 1
        indptr = np.cumsum(deg)
        indices = np.empty(2 * self.m, dtype=np.int64)
        fill = indptr[:-1].copy()
        for u, v in edge_list:
            indices[fill[u]] = v
            fill[u] += 1
            indices[fill[v]] = u
            fill[v] += 1
        self.indptr = indptr
        self.indices = indices
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)

    # plain accessors, no accounting; algorithms use an oracle instead
    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def neighbors(self, v: int) -> list[int]:
        return self.indices[self.indptr[v]:self.indptr[v + 1]].tolist()

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def average_degree(self) -> float:
        return 2 * self.m / self.n if self.n else 0.0

    def adjacency(self) -> list[list[int]]:
        return [self.neighbors(v) for v in range(self.n)]

    def shuffled(self, rng: np.random.Generator) -> "Graph":
        """Same graph with every incidence list independently permuted."""
        g = Graph.__new__(Graph)
        g.n, g.multigraph, g.edges, g.m = self.n, self.multigraph, self.edges, self.m
        indices = self.indices.copy()
        for v in range(self.n):
            a, b = self.indptr[v], self.indptr[v + 1]
            indices[a:b] = rng.permutation(indices[a:b])
        g.indptr = self.indptr
        g.indices = indices
        g.indices.setflags(write=False)
        return g

    def __repr__(self):
        kind = "multigraph" if self.multigraph else "graph"
        return f"<{kind} n={self.n} m={self.m}>"

    def __getstate__(self):
        return {"n": self.n, "edges": self.edges, "multigraph": self.multigraph,
                "indices": self.indices}

    def __setstate__(self, state):
        self.__init__(state["n"], state["edges"], state["multigraph"])
        self.indices = state["indices"]


def load_graph(path, multigraph: bool = False) -> Graph:
    """Read the edge-list format: header ``n m`` then ``m`` lines ``u v``."""
    text = Path(path).read_text()
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise GraphFormatError("empty file")
    return parse_edge_list(lines, multigraph=multigraph)


def parse_edge_list(lines: list[str], multigraph: bool = False) -> Graph:
    try:
        n, m = (int(t) for t in lines[0].split())
    except ValueError:
        raise GraphFormatError(f"bad header line: {lines[0]!r}") from None
    if len(lines) - 1 != m:
        raise GraphFormatError(f"header announces {m} edges, found {len(lines) - 1}")
    edges = []
    for lineno, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected 'u v', got {ln!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer node in {ln!r}") from None
    return Graph(n, edges, multigraph=multigraph)


def format_graph(g: Graph) -> str:
    out = [f"{g.n} {g.m}"]
    out.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(out) + "\n"


def write_graph(g: Graph, path) -> None:
    Path(path).write_text(format_graph(g))


def boundary_degree(g: Graph, nodes) -> int:
    """Number of edges with exactly one endpoint in ``nodes``."""
    inside = set(nodes)
    for v in inside:
        if not 0 <= v < g.n:
            raise IndexError(f"node {v} out of range")
    return sum((u in inside) != (v in inside) for u, v in g.edges)


class GraphOracle:
    """Query interface of the incidence-lists model.

    Subclasses implement ``_degree`` and ``_neighbor``; the public methods
    count every call.
    """

    def __init__(self):
        self._queries = 0
        self._lock = threading.Lock()

    def node_count(self) -> int:
        raise NotImplementedError

    def worker(self) -> "GraphOracle":
        """An oracle for one worker thread with its own query counter.

        Merge its count back with :meth:`absorb` when the worker is done.
        """
        return _WorkerView(self)

    def absorb(self, other: "GraphOracle") -> None:
        with self._lock:
            self._queries += other.queries_made

    def degree(self, v: int) -> int:
        self._queries += 1
        return self._degree(v)

    def neighbor(self, v: int, i: int) -> int:
        self._queries += 1
        return self._neighbor(v, i)

    @property
    def queries_made(self) -> int:
        return self._queries

    def _degree(self, v):
        raise NotImplementedError

    def _neighbor(self, v, i):
        raise NotImplementedError


class _WorkerView(GraphOracle):
    """Serialises access to a shared oracle; counts queries locally."""

    def __init__(self, base: GraphOracle):
        super().__init__()
        self._base = base

    def node_count(self) -> int:
        return self._base.node_count()

    def _degree(self, v):
        with self._base._lock:
            return self._base._degree(v)

    def _neighbor(self, v, i):
        with self._base._lock:
            return self._base._neighbor(v, i)


class CountedOracle(GraphOracle):
    """Oracle over an in-memory :class:`Graph`.

    The compiled search kernel recognises this class and runs directly on
    the CSR arrays, adding its exact query count to :attr:`queries_made`.
    """

    def __init__(self, graph: Graph):
        super().__init__()
        self.graph = graph
        self._indptr = graph.indptr
        self._indices = graph.indices

    def node_count(self) -> int:
        return self.graph.n

    def _degree(self, v):
        if not 0 <= v < self.graph.n:
            raise IndexError(f"node {v} out of range")
        return int(self._indptr[v + 1] - self._indptr[v])

    def _neighbor(self, v, i):
        a = self._indptr[v]
        if not 0 <= i < self._indptr[v + 1] - a:
            raise IndexError(f"neighbor index {i} out of range for node {v}")
        return int(self._indices[a + i])

    def worker(self) -> "CountedOracle":
        return CountedOracle(self.graph)

    def add_queries(self, k: int) -> None:
        self._queries += k


def counted_oracle(g: Graph) -> CountedOracle:
    return CountedOracle(g)


class QueryBudget:
    """Shared, decrement-only query allowance.

    ``remaining=None`` means unlimited. All mutation happens under a lock so
    several workers can draw from one budget; it never goes negative.
    """

    UNLIMITED = 1 << 62

    def __init__(self, remaining: int | None = None):
        if remaining is not None and remaining < 0:
            raise ValueError("budget must be non-negative")
        self._remaining = remaining
        self._lock = threading.RLock()
        self.exhausted = False

    @property
    def remaining(self) -> int | None:
        return self._remaining

    @property
    def unlimited(self) -> bool:
        return self._remaining is None

    def try_consume(self, k: int = 1) -> bool:
        with self._lock:
            if self._remaining is None:
                return True
            if self._remaining < k:
                self.exhausted = True
                return False
            self._remaining -= k
            return True

    @contextmanager
    def hold(self):
        """Lock the budget and yield the allowance for a batch of queries.

        The caller must report usage with :meth:`spend_held` before leaving
        the block.
        """
        with self._lock:
            yield self.UNLIMITED if self._remaining is None else self._remaining

    def spend_held(self, used: int, exhausted: bool) -> None:
        with self._lock:
            if self._remaining is not None:
                if used > self._remaining:
                    raise RuntimeError("query budget overspent")
                self._remaining -= used
            if exhausted:
                self.exhausted = True

    def __repr__(self):
        return f"QueryBudget({self._remaining!r})"
