import networkx as nx
import numpy as np
import pytest

from sparsetest import search
from sparsetest.graph import Graph


@pytest.fixture(params=search.available_backends())
def backend(request):
    saved = search.get_backend()
    search.set_backend(request.param)
    yield request.param
    search.set_backend(saved)


def from_nx(G) -> Graph:
    G = nx.convert_node_labels_to_integers(G)
    return Graph(G.number_of_nodes(), list(G.edges()), multigraph=G.is_multigraph())


def random_multigraph(rng, n_lo=2, n_hi=12, density=2.0) -> Graph:
    n = int(rng.integers(n_lo, n_hi + 1))
    m = int(rng.integers(0, int(density * n) + 1))
    edges = [tuple(int(x) for x in rng.choice(n, 2, replace=False)) for _ in range(m)]
    return Graph(n, edges, multigraph=True)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
