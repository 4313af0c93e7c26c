# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled bounded depth-first search over CSR incidence lists.

Same query trace as ``_search_py.bounded_dfs``; see that module for the
rules. Visited nodes live in a small open-addressing table sized from the
node limit, so a call costs O(limit) memory regardless of ``n``.

``two_leaf_scan`` runs the whole 2-class-leaf search (three searches, and
optionally again with each first-search tree edge omitted) in one call.
It mirrors ``local._two_leaf`` and ``local._three_leaf`` query for query.
"""
import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, calloc, free
from libc.string cimport memset
from libc.stdint cimport int64_t

cnp.import_array()

DEF COMPLETE = 0
DEF TRUNCATED = 1
DEF EXHAUSTED = 2

# two-leaf outcome codes, shared with local.py
DEF LEAF_COMPONENT = 0
DEF LEAF_BRIDGE = 1
DEF NOT_A_LEAF = 2
DEF TOO_BIG = 3
DEF OUT_OF_BUDGET = 4


cdef struct Ctx:
    const int64_t* indptr
    const int64_t* indices
    int64_t budget
    int64_t queries
    bint exhausted


cdef struct Table:
    int64_t* data
    Py_ssize_t mask


cdef struct Run:
    # one search's output: discovery order, parent node and global slot id
    # of the arc that discovered each node
    int64_t* order
    int64_t* par
    int64_t* slot
    Py_ssize_t count
    int64_t boundary


cdef struct Stack:
    int64_t* node
    int64_t* deg
    int64_t* nxt
    int64_t* par


cdef inline bint _sorted_contains(const int64_t* arr, Py_ssize_t length, int64_t key) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = length, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if arr[mid] < key:
            lo = mid + 1
        else:
            hi = mid
    return lo < length and arr[lo] == key


cdef inline Py_ssize_t _hash(int64_t key, Py_ssize_t mask) noexcept nogil:
    cdef unsigned long long h = <unsigned long long>key * 0x9E3779B97F4A7C15ULL
    return <Py_ssize_t>((h >> 17) & mask)


cdef inline bint _set_add(Table* t, int64_t key) noexcept nogil:
    """Insert key+1 (0 marks empty); return False if already present."""
    cdef Py_ssize_t j = _hash(key, t.mask)
    cdef int64_t k = key + 1
    while t.data[j] != 0:
        if t.data[j] == k:
            return False
        j = (j + 1) & t.mask
    t.data[j] = k
    return True


cdef inline bint _set_has(Table* t, int64_t key) noexcept nogil:
    cdef Py_ssize_t j = _hash(key, t.mask)
    cdef int64_t k = key + 1
    while t.data[j] != 0:
        if t.data[j] == k:
            return True
        j = (j + 1) & t.mask
    return False


cdef inline void _set_clear(Table* t) noexcept nogil:
    memset(t.data, 0, (t.mask + 1) * sizeof(int64_t))


cdef Py_ssize_t _table_size(Py_ssize_t cap) noexcept nogil:
    cdef Py_ssize_t tsize = 16
    while tsize < 2 * cap + 2:
        tsize <<= 1
    return tsize


cdef int _dfs(Ctx* c, Table* visited, Stack* st, Run* out, int64_t s, int64_t limit,
              const int64_t* forbid, Py_ssize_t nf, Table* allowed,
              int64_t omit_slot, int64_t omit_a, int64_t omit_b) noexcept nogil:
    """Core search; ``allowed`` may be NULL. Returns COMPLETE/TRUNCATED/EXHAUSTED."""
    cdef Py_ssize_t top
    cdef int64_t v, deg, i, w, base
    cdef bint reverse_dropped = False
    out.order[0] = s
    out.par[0] = -1
    out.slot[0] = -1
    out.count = 1
    out.boundary = 0
    if limit <= 1:
        return TRUNCATED
    _set_clear(visited)
    _set_add(visited, s)
    st.node[0] = s
    st.deg[0] = -1
    st.nxt[0] = 0
    st.par[0] = -1
    top = 1
    while top > 0:
        v = st.node[top - 1]
        deg = st.deg[top - 1]
        base = c.indptr[v]
        if deg < 0:
            if c.queries >= c.budget:
                c.exhausted = True
                return EXHAUSTED
            c.queries += 1
            deg = c.indptr[v + 1] - base
            st.deg[top - 1] = deg
        i = st.nxt[top - 1]
        if i >= deg:
            top -= 1
            continue
        st.nxt[top - 1] = i + 1
        if base + i == omit_slot:
            continue
        if nf > 0 and _sorted_contains(forbid, nf, base + i):
            continue
        if deg == 1 and st.par[top - 1] >= 0:
            continue
        if c.queries >= c.budget:
            c.exhausted = True
            return EXHAUSTED
        c.queries += 1
        w = c.indices[base + i]
        if not reverse_dropped and v == omit_b and w == omit_a:
            reverse_dropped = True
            continue
        if allowed != NULL and not _set_has(allowed, w):
            out.boundary += 1
            continue
        if not _set_add(visited, w):
            continue
        out.order[out.count] = w
        out.par[out.count] = v
        out.slot[out.count] = base + i
        out.count += 1
        if out.count >= limit:
            return TRUNCATED
        st.node[top] = w
        st.deg[top] = -1
        st.nxt[top] = 0
        st.par[top] = v
        top += 1
    return COMPLETE


cdef int _cmp_int64(const void* a, const void* b) noexcept nogil:
    cdef int64_t x = (<const int64_t*>a)[0]
    cdef int64_t y = (<const int64_t*>b)[0]
    return (x > y) - (x < y)


cdef extern from "stdlib.h":
    void qsort(void* base, size_t nmemb, size_t size,
               int (*compar)(const void*, const void*) noexcept nogil) noexcept nogil


cdef Py_ssize_t _tree_slots_sorted(Run* r, int64_t* dst) noexcept nogil:
    cdef Py_ssize_t j
    for j in range(1, r.count):
        dst[j - 1] = r.slot[j]
    qsort(dst, r.count - 1, sizeof(int64_t), _cmp_int64)
    return r.count - 1


def bounded_dfs(const int64_t[::1] indptr, const int64_t[::1] indices,
                int64_t s, int64_t limit, int64_t budget,
                const int64_t[::1] forbid, const int64_t[::1] allowed, bint restrict,
                int64_t omit_slot, int64_t omit_a, int64_t omit_b):
    """Return ``(order, parents, slots, complete, exhausted, queries, boundary)``.

    ``forbid`` holds sorted global slot ids (``indptr[v] + i``); ``allowed``
    holds node ids and is used only when ``restrict`` is set. ``omit_slot``
    is a global slot id or -1. Returned slots are local indices.
    """
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t cap = limit if limit < n + 1 else n + 1
    if cap < 1:
        cap = 1
    cdef Py_ssize_t na = allowed.shape[0], j
    cdef Ctx c
    c.indptr = &indptr[0]
    c.indices = &indices[0] if indices.shape[0] > 0 else NULL
    c.budget = budget
    c.queries = 0
    c.exhausted = False

    order_arr = np.empty(cap, dtype=np.int64)
    par_arr = np.empty(cap, dtype=np.int64)
    slot_arr = np.empty(cap, dtype=np.int64)
    cdef int64_t[::1] order = order_arr
    cdef int64_t[::1] par = par_arr
    cdef int64_t[::1] slot = slot_arr
    cdef Run out
    out.order = &order[0]
    out.par = &par[0]
    out.slot = &slot[0]

    cdef Table visited, allow
    visited.mask = _table_size(cap) - 1
    visited.data = <int64_t*>calloc(visited.mask + 1, sizeof(int64_t))
    allow.mask = _table_size(na) - 1
    allow.data = <int64_t*>calloc(allow.mask + 1, sizeof(int64_t))
    cdef Stack st
    st.node = <int64_t*>malloc(cap * sizeof(int64_t))
    st.deg = <int64_t*>malloc(cap * sizeof(int64_t))
    st.nxt = <int64_t*>malloc(cap * sizeof(int64_t))
    st.par = <int64_t*>malloc(cap * sizeof(int64_t))
    if (visited.data == NULL or allow.data == NULL or st.node == NULL or st.deg == NULL
            or st.nxt == NULL or st.par == NULL):
        free(visited.data); free(allow.data)
        free(st.node); free(st.deg); free(st.nxt); free(st.par)
        raise MemoryError()
    cdef int status
    with nogil:
        for j in range(na):
            _set_add(&allow, allowed[j])
        status = _dfs(&c, &visited, &st, &out, s, limit,
                      &forbid[0] if forbid.shape[0] > 0 else NULL, forbid.shape[0],
                      &allow if restrict else NULL, omit_slot, omit_a, omit_b)
    free(visited.data); free(allow.data)
    free(st.node); free(st.deg); free(st.nxt); free(st.par)
    cdef Py_ssize_t count = out.count
    for j in range(1, count):
        slot[j] -= indptr[par[j]]
    return (order_arr[:count], par_arr[:count], slot_arr[:count],
            status == COMPLETE, status == EXHAUSTED, c.queries, out.boundary)


cdef struct Work:
    Table visited
    Table allowed
    Stack st
    Run a       # first search of a two-leaf call
    Run b       # second search
    Run t       # third search
    int64_t* fa  # sorted tree slots of a
    int64_t* fb  # sorted tree slots of b


cdef int _two_leaf(Ctx* c, Work* w, Run* first, int64_t s, int64_t r,
                   int64_t omit_slot, int64_t omit_a, int64_t omit_b) noexcept nogil:
    """Mirror of ``local._two_leaf``; on a leaf the nodes are ``w.b.order[:w.b.count]``."""
    cdef int status
    cdef Py_ssize_t nfa, nfb, j
    if first == NULL:
        first = &w.a
        status = _dfs(c, &w.visited, &w.st, first, s, r + 1, NULL, 0, NULL,
                      omit_slot, omit_a, omit_b)
        if status == EXHAUSTED:
            return OUT_OF_BUDGET
    nfa = _tree_slots_sorted(first, w.fa)
    status = _dfs(c, &w.visited, &w.st, &w.b, s, r + 1, w.fa, nfa, NULL,
                  omit_slot, omit_a, omit_b)
    if status == EXHAUSTED:
        return OUT_OF_BUDGET
    if first.count == r + 1 and w.b.count == r + 1:
        return TOO_BIG
    _set_clear(&w.allowed)
    for j in range(w.b.count):
        _set_add(&w.allowed, w.b.order[j])
    nfb = _tree_slots_sorted(&w.b, w.fb)
    status = _dfs(c, &w.visited, &w.st, &w.t, s, w.b.count + 1, w.fb, nfb, &w.allowed,
                  omit_slot, omit_a, omit_b)
    if status == EXHAUSTED:
        return OUT_OF_BUDGET
    if w.t.count != w.b.count or w.t.boundary > 1:
        return NOT_A_LEAF
    return LEAF_COMPONENT if w.t.boundary == 0 else LEAF_BRIDGE


def two_leaf_scan(const int64_t[::1] indptr, const int64_t[::1] indices,
                  int64_t s, int64_t r, int64_t budget, bint per_edge):
    """2-class-leaf search around ``s`` with size bound ``r``.

    Returns ``(queries, exhausted, base_kind, base_size, base_nodes, leaves)``
    where ``base_*`` describe the search in the whole graph and ``leaves``
    lists the node arrays of every leaf found: the base one first, then one
    per first-search tree edge omitted (only with ``per_edge``). The base
    search's first pass doubles as the source of those tree edges.
    """
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t cap = r + 2
    if cap > n + 2:
        cap = n + 2
    cdef Ctx c
    c.indptr = &indptr[0]
    c.indices = &indices[0] if indices.shape[0] > 0 else NULL
    c.budget = budget
    c.queries = 0
    c.exhausted = False

    cdef Work w
    cdef Run outer
    cdef Py_ssize_t tsize = _table_size(cap)
    w.visited.mask = tsize - 1
    w.allowed.mask = tsize - 1
    w.visited.data = <int64_t*>calloc(tsize, sizeof(int64_t))
    w.allowed.data = <int64_t*>calloc(tsize, sizeof(int64_t))
    cdef int64_t* pool = <int64_t*>malloc(18 * cap * sizeof(int64_t))
    if w.visited.data == NULL or w.allowed.data == NULL or pool == NULL:
        free(w.visited.data); free(w.allowed.data); free(pool)
        raise MemoryError()
    w.st.node = pool
    w.st.deg = pool + cap
    w.st.nxt = pool + 2 * cap
    w.st.par = pool + 3 * cap
    w.a.order = pool + 4 * cap
    w.a.par = pool + 5 * cap
    w.a.slot = pool + 6 * cap
    w.b.order = pool + 7 * cap
    w.b.par = pool + 8 * cap
    w.b.slot = pool + 9 * cap
    w.t.order = pool + 10 * cap
    w.t.par = pool + 11 * cap
    w.t.slot = pool + 12 * cap
    w.fa = pool + 13 * cap
    w.fb = pool + 14 * cap
    outer.order = pool + 15 * cap
    outer.par = pool + 16 * cap
    outer.slot = pool + 17 * cap

    leaves = []
    cdef int status, kind, base_kind
    cdef Py_ssize_t j
    cdef int64_t p, child
    base_nodes = None
    base_size = 0
    try:
        with nogil:
            status = _dfs(&c, &w.visited, &w.st, &outer, s, r + 1, NULL, 0, NULL, -1, -1, -1)
        if status == EXHAUSTED:
            return c.queries, True, OUT_OF_BUDGET, 0, None, leaves
        with nogil:
            base_kind = _two_leaf(&c, &w, &outer, s, r, -1, -1, -1)
        if base_kind == OUT_OF_BUDGET:
            return c.queries, True, base_kind, 0, None, leaves
        if base_kind == NOT_A_LEAF:
            base_size = w.b.count
        elif base_kind != TOO_BIG:
            base_size = w.b.count
            base_nodes = np.asarray(<int64_t[:w.b.count]>w.b.order).copy()
            leaves.append(base_nodes)
        if per_edge:
            for j in range(1, outer.count):
                p = outer.par[j]
                child = outer.order[j]
                with nogil:
                    kind = _two_leaf(&c, &w, NULL, s, r, outer.slot[j], p, child)
                if kind == OUT_OF_BUDGET:
                    return c.queries, True, base_kind, base_size, base_nodes, leaves
                if kind == LEAF_COMPONENT or kind == LEAF_BRIDGE:
                    leaves.append(np.asarray(<int64_t[:w.b.count]>w.b.order).copy())
        return c.queries, False, base_kind, base_size, base_nodes, leaves
    finally:
        free(w.visited.data); free(w.allowed.data); free(pool)
