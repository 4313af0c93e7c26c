import pickle

import numpy as np
import pytest

from sparsetest.graph import (CountedOracle, Graph, GraphFormatError, QueryBudget,
                              boundary_degree, counted_oracle, load_graph, write_graph)


def test_csr_layout_follows_edge_order():
    g = Graph(4, [(0, 1), (2, 0), (0, 3)])
    assert g.neighbors(0) == [1, 2, 3]
    assert g.neighbors(2) == [0]
    assert g.degree(0) == 3
    assert g.m == 3 and g.average_degree == 1.5
    assert g.degrees().tolist() == [3, 1, 1, 1]


@pytest.mark.parametrize("n,edges", [
    (-1, []),
    (2, [(0, 2)]),
    (2, [(1, 1)]),
    (3, [(0, 1), (1, 0)]),
])
def test_rejects_bad_input(n, edges):
    with pytest.raises(GraphFormatError):
        Graph(n, edges)


def test_multigraph_keeps_parallel_edges():
    g = Graph(2, [(0, 1), (1, 0)], multigraph=True)
    assert g.neighbors(0) == [1, 1]


def test_arrays_are_read_only():
    g = Graph(2, [(0, 1)])
    with pytest.raises(ValueError):
        g.indices[0] = 1


def test_shuffled_permutes_each_list_only():
    g = Graph(5, [(0, i) for i in range(1, 5)] + [(1, 2)])
    h = g.shuffled(np.random.default_rng(0))
    for v in range(g.n):
        assert sorted(h.neighbors(v)) == sorted(g.neighbors(v))
    assert h.edges == g.edges


def test_pickle_round_trip_keeps_neighbor_order():
    g = Graph(4, [(0, 1), (0, 2), (0, 3)]).shuffled(np.random.default_rng(3))
    h = pickle.loads(pickle.dumps(g))
    assert h.indices.tolist() == g.indices.tolist()


def test_edge_list_io(tmp_path):
    g = Graph(5, [(0, 1), (3, 4), (1, 2)])
    path = tmp_path / "g.txt"
    write_graph(g, path)
    h = load_graph(path)
    assert (h.n, h.edges) == (g.n, g.edges)


@pytest.mark.parametrize("text", ["", "3\n", "2 1\n0 5\n", "2 2\n0 1\n", "x y\n"])
def test_load_graph_errors(tmp_path, text):
    path = tmp_path / "bad.txt"
    path.write_text(text)
    with pytest.raises(GraphFormatError):
        load_graph(path)


def test_boundary_degree():
    g = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert boundary_degree(g, {0, 1}) == 2
    assert boundary_degree(g, set(range(4))) == 0


def test_oracle_counts_each_query():
    o = counted_oracle(Graph(3, [(0, 1), (1, 2)]))
    assert o.node_count() == 3
    assert o.queries_made == 0
    assert o.degree(1) == 2
    assert o.neighbor(1, 1) == 2
    assert o.queries_made == 2
    with pytest.raises(IndexError):
        o.neighbor(0, 1)


def test_worker_copies_merge_counts():
    o = counted_oracle(Graph(3, [(0, 1), (1, 2)]))
    w = o.worker()
    assert isinstance(w, CountedOracle) and w is not o
    w.degree(0)
    w.degree(1)
    o.absorb(w)
    assert o.queries_made == 2


def test_budget():
    b = QueryBudget(3)
    assert b.try_consume(2)
    assert not b.try_consume(2)
    assert b.exhausted and b.remaining == 1
    assert b.try_consume()
    assert b.remaining == 0
    assert QueryBudget(None).unlimited


def test_budget_hold_rejects_overspend():
    b = QueryBudget(2)
    with b.hold() as allowance:
        assert allowance == 2
        with pytest.raises(RuntimeError):
            b.spend_held(3, False)
