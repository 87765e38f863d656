import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # tests/oracles.py

from subsense.graph import SubstituteGraph


def random_graph(rng: np.random.Generator, max_nodes: int = 8) -> tuple[SubstituteGraph, dict]:
    """Random connected-ish integer-weighted graph with at least one edge.

    Returns the graph and its edge-weight dict (for the direct oracle).
    """
    n = int(rng.integers(3, max_nodes + 1))
    weights: dict[tuple[int, int], int] = {}
    g = SubstituteGraph()
    for u in range(n):
        g.add_node(u)
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < 0.5:
                w = int(rng.integers(1, 6))
                g.add_edge(u, v, w)
                weights[(u, v)] = w
    if not weights:
        g.add_edge(0, 1, 1)
        weights[(0, 1)] = 1
    return g, weights


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def two_triangles():
    g = SubstituteGraph()
    for u, v in [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]:
        g.add_edge(u, v)
    return g
