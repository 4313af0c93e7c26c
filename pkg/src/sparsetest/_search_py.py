"""Pure-Python bounded depth-first search (reference and fallback backend).

Query trace, shared exactly with the compiled kernel:

* a node's degree is queried when the search first starts scanning it;
* slots are scanned in index order; a forbidden slot or the omitted slot
  is skipped without a query;
* a degree-1 node entered through an arc is not scanned: its only slot
  leads back to the parent;
* every other slot costs one ``neighbor`` query;
* the search stops as soon as ``limit`` nodes are discovered, when the
  budget refuses a query, or when the stack drains.
"""
from __future__ import annotations


class SearchResult:
    __slots__ = ("order", "tree", "complete", "exhausted", "queries", "boundary")

    def __init__(self, order, tree, complete, exhausted, queries, boundary):
        self.order = order          # discovered nodes, discovery order
        self.tree = tree            # (parent, slot, child) per discovered non-root node
        self.complete = complete    # stack drained: order is everything reachable
        self.exhausted = exhausted  # stopped because the budget refused a query
        self.queries = queries
        self.boundary = boundary    # queried arcs leading outside ``allowed``

    @property
    def size(self) -> int:
        return len(self.order)

    @property
    def truncated(self) -> bool:
        return not self.complete and not self.exhausted

    def tree_slots(self):
        return {(p, i) for p, i, _ in self.tree}

    def __repr__(self):
        state = "complete" if self.complete else ("exhausted" if self.exhausted else "truncated")
        return f"<SearchResult size={self.size} {state} queries={self.queries}>"


def bounded_dfs(oracle, s, limit, budget, forbid=None, allowed=None, omit=None, record=None):
    """Depth-first search from ``s`` for up to ``limit`` nodes.

    ``forbid`` is a set of ``(node, slot)`` arcs that may not be traversed.
    ``allowed`` restricts discovery to a node set. ``omit=(a, i, b)`` removes
    the edge behind slot ``(a, i)``, which leads to ``b``; on ``b``'s side the
    first slot pointing to ``a`` is dropped. ``record``, if given, is a dict
    receiving ``("deg", v) -> degree`` and ``(v, i) -> neighbor`` for every
    answer seen.
    """
    order = [s]
    tree = []
    if limit <= 1:
        return SearchResult(order, tree, False, False, 0, 0)
    visited = {s}
    forbid = forbid or ()
    queries = 0
    boundary = 0
    exhausted = False
    truncated = False
    omit_a = omit_i = omit_b = -1
    if omit is not None:
        omit_a, omit_i, omit_b = omit
    reverse_dropped = False
    # frame: [node, degree or -1, next slot, parent or -1]
    stack = [[s, -1, 0, -1]]
    while stack:
        frame = stack[-1]
        v = frame[0]
        deg = frame[1]
        if deg < 0:
            if not budget.try_consume():
                exhausted = True
                break
            queries += 1
            deg = frame[1] = oracle.degree(v)
            if record is not None:
                record[("deg", v)] = deg
        i = frame[2]
        if i >= deg:
            stack.pop()
            continue
        frame[2] = i + 1
        if (v, i) in forbid or (v == omit_a and i == omit_i):
            continue
        if deg == 1 and frame[3] >= 0:
            if record is not None:
                record[(v, 0)] = frame[3]
            continue
        if not budget.try_consume():
            exhausted = True
            break
        queries += 1
        w = oracle.neighbor(v, i)
        if record is not None:
            record[(v, i)] = w
        if not reverse_dropped and v == omit_b and w == omit_a:
            reverse_dropped = True
            continue
        if allowed is not None and w not in allowed:
            boundary += 1
            continue
        if w in visited:
            continue
        visited.add(w)
        order.append(w)
        tree.append((v, i, w))
        if len(order) >= limit:
            truncated = True
            break
        stack.append([w, -1, 0, v])
    complete = not exhausted and not truncated
    return SearchResult(order, tree, complete, exhausted, queries, boundary)
