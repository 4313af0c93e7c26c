"""Backend selection for the bounded DFS kernel.

The compiled kernel is used when it imported and the oracle is a plain
:class:`~sparsetest.graph.CountedOracle` (it needs the CSR arrays).
Anything else, or ``SPARSETEST_BACKEND=python``, runs the pure-Python
search. Both produce identical results and query counts.
"""
from __future__ import annotations

import os

import numpy as np

from ._search_py import SearchResult
from ._search_py import bounded_dfs as _dfs_py
from .graph import CountedOracle

try:
    from . import _search_ext
except ImportError:  # pragma: no cover - exercised when the build is skipped
    _search_ext = None

_EMPTY = np.empty(0, dtype=np.int64)
_backend = os.environ.get("SPARSETEST_BACKEND", "auto")


def available_backends() -> list[str]:
    return ["python", "ext"] if _search_ext is not None else ["python"]


def set_backend(name: str) -> None:
    global _backend
    if name not in ("auto", "python", "ext"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "ext" and _search_ext is None:
        raise RuntimeError("compiled kernel is not built")
    _backend = name


def get_backend() -> str:
    if _backend == "auto":
        return "ext" if _search_ext is not None else "python"
    return _backend


def bounded_dfs(oracle, s, limit, budget, forbid=None, allowed=None, omit=None,
                record=None) -> SearchResult:
    if (record is None and type(oracle) is CountedOracle
            and _search_ext is not None and get_backend() == "ext"):
        return _dfs_ext(oracle, s, limit, budget, forbid, allowed, omit)
    return _dfs_py(oracle, s, limit, budget, forbid, allowed, omit, record)


def _dfs_ext(oracle, s, limit, budget, forbid, allowed, omit):
    g = oracle.graph
    indptr = g.indptr
    if forbid:
        fids = np.fromiter((indptr[v] + i for v, i in forbid), dtype=np.int64, count=len(forbid))
        fids.sort()
    else:
        fids = _EMPTY
    if allowed is not None:
        allow = np.fromiter(allowed, dtype=np.int64, count=len(allowed))
        allow.sort()
        restrict = True
    else:
        allow, restrict = _EMPTY, False
    if omit is not None:
        omit_slot, omit_a, omit_b = int(indptr[omit[0]] + omit[1]), omit[0], omit[2]
    else:
        omit_slot = omit_a = omit_b = -1
    if not 0 <= s < g.n:
        raise IndexError(f"node {s} out of range")
    with budget.hold() as allowance:
        order, par, slot, complete, exhausted, queries, boundary = _search_ext.bounded_dfs(
            indptr, g.indices, s, limit, allowance, fids, allow, restrict,
            omit_slot, omit_a, omit_b)
        budget.spend_held(queries, exhausted)
    oracle.add_queries(queries)
    order_l = order.tolist()
    tree = list(zip(par[1:].tolist(), slot[1:].tolist(), order_l[1:]))
    return SearchResult(order_l, tree, complete, exhausted, queries, boundary)


# outcome codes returned by the compiled two-leaf scan
SCAN_KINDS = ("component", "bridge", "not_a_leaf", "too_big", "exhausted")


def scan_available(oracle) -> bool:
    return type(oracle) is CountedOracle and _search_ext is not None and get_backend() == "ext"


def two_leaf_scan(oracle, s, r, budget, per_edge):
    """Compiled 2-class-leaf search; see ``_search_ext.two_leaf_scan``.

    Returns ``(exhausted, base_kind, base_size, base_nodes, leaves)`` with
    ``base_kind`` one of :data:`SCAN_KINDS`.
    """
    g = oracle.graph
    if not 0 <= s < g.n:
        raise IndexError(f"node {s} out of range")
    with budget.hold() as allowance:
        queries, exhausted, kind, size, base, leaves = _search_ext.two_leaf_scan(
            g.indptr, g.indices, s, r, allowance, per_edge)
        budget.spend_held(queries, exhausted)
    oracle.add_queries(queries)
    return exhausted, SCAN_KINDS[kind], size, base, leaves
