import os

import pytest

from bipinv.graph import BipartiteGraph, load_graph

DATA = os.path.join(os.path.dirname(__file__), "data")

# W8 vertex names: r1..r4 -> 0..3, c1..c4 -> 4..7
R1, R2, R3, R4, C1, C2, C3, C4 = range(8)


def data_path(name):
    return os.path.join(DATA, name)


def graph(n, edges):
    return BipartiteGraph.from_edges(n, edges)


@pytest.fixture
def w8():
    return load_graph(data_path("w8.txt"))


@pytest.fixture
def p4():
    return graph(4, [(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def k2():
    return graph(2, [(0, 1)])


@pytest.fixture
def c4():
    return graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
