import itertools

import pytest
from hypothesis import strategies as st

from graphrenorm import fixtures as fx
from graphrenorm.graphs import Graph, Subgraph, is_connected


@pytest.fixture
def dunce():
    return fx.dunce_cap()


@pytest.fixture
def fish():
    return fx.fish()


@pytest.fixture
def k3():
    return fx.k_complete(3)


@pytest.fixture
def k4():
    return fx.k_complete(4)


@st.composite
def small_multigraphs(draw, max_vertices=4, max_edges=6, dim=4):
    n = draw(st.integers(min_value=2, max_value=max_vertices))
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    m = draw(st.integers(min_value=1, max_value=max_edges))
    edges = tuple(draw(st.sampled_from(pairs)) for _ in range(m))
    labels = tuple(str(i) for i in range(n))
    return Graph(labels, edges, 0, dim)


def connected_on_touched(graph: Graph) -> bool:
    full = graph.full()
    touched = {v for e in graph.edges for v in e}
    return len(touched) == graph.n_vertices and is_connected(full)


def all_subgraphs(graph: Graph):
    m = graph.n_edges
    for mask in range(1 << m):
        yield Subgraph(graph, frozenset(i for i in range(m)
                                        if mask >> i & 1))
