# tests/conftest.py

import os

import pytest

from steinerminor.core.graph import TerminalSet, WeightedGraph

SAMPLE_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "sample_graphs")


def unit_path(n):
    return WeightedGraph(n, [(v, v + 1, 1.0) for v in range(n - 1)])


def unit_grid(w, h):
    edges = []
    for y in range(h):
        for x in range(w):
            v = y * w + x
            if x < w - 1:
                edges.append((v, v + 1, 1.0))
            if y < h - 1:
                edges.append((v, v + w, 1.0))
    return WeightedGraph(w * h, edges)


@pytest.fixture
def sample_dir():
    return SAMPLE_DIR


@pytest.fixture
def path3():
    """a=0, b=1, c=2 with unit weights; terminals a and c."""
    g = WeightedGraph(3, [(0, 1, 1.0), (1, 2, 1.0)], ["a", "b", "c"])
    return g, TerminalSet.of([0, 2])


@pytest.fixture
def star():
    """Center s=0 with unit-weight leaves 1, 2, 3; the leaves are terminals."""
    g = WeightedGraph(4, [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)], ["s", "t1", "t2", "t3"])
    return g, TerminalSet.of([1, 2, 3])


@pytest.fixture
def triangle():
    return WeightedGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 5.0)])


@pytest.fixture
def cycle4():
    return WeightedGraph(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)])


@pytest.fixture
def path4():
    return unit_path(4)


@pytest.fixture
def grid2():
    return unit_grid(2, 2)


@pytest.fixture
def grid3():
    return unit_grid(3, 3)
