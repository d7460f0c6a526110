"""
Pytest configuration and shared fixtures for the EPPA witness toolkit tests.
"""
import os

# keep test runs from writing var/logs
os.environ.setdefault('DISABLE_FILE_LOGGING', 'true')

import pytest
from pathlib import Path

from common.structures import Digraph, Graph, Hypergraph, complete_graph, cycle_graph, path_graph
from common.utils import EppaConfig


# Test data directory
FIXTURES_DIR = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir():
    """Return the fixtures directory path."""
    return FIXTURES_DIR


@pytest.fixture
def config():
    """Default caps, independent of any EPPA_* variables in the environment."""
    return EppaConfig.defaults()


@pytest.fixture
def p3():
    """Path on three vertices with centre 1."""
    return path_graph(3)


@pytest.fixture
def p4():
    return path_graph(4)


@pytest.fixture
def c5():
    return cycle_graph(5)


@pytest.fixture
def c6():
    return cycle_graph(6)


@pytest.fixture
def c7():
    return cycle_graph(7)


@pytest.fixture
def k3():
    return complete_graph(3)


@pytest.fixture
def k2_k1():
    """One edge plus an isolated vertex."""
    return Graph(3, frozenset({(0, 1)}))


@pytest.fixture
def transitive_triangle():
    return Digraph(3, frozenset({(0, 1), (1, 2), (0, 2)}))


@pytest.fixture
def oriented_triangle():
    return Digraph(3, frozenset({(0, 1), (1, 2), (2, 0)}))


@pytest.fixture
def single_hyperedge():
    return Hypergraph(4, 3, frozenset({(0, 1, 2)}))
