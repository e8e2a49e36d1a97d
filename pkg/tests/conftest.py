"""Shared fixtures: the six-tensor example network, settings and small circuits."""

import itertools

import networkx as nx
import pytest

from qsim.config import Heuristic, Settings
from qsim.data.circuits import parse_circuit
from tests.helpers import EXAMPLE_SCOPES


@pytest.fixture
def example_graph() -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(6))
    for scope in EXAMPLE_SCOPES.values():
        graph.add_edges_from(itertools.combinations(scope, 2))
    return graph


@pytest.fixture
def example_scopes() -> list[tuple[int, ...]]:
    return list(EXAMPLE_SCOPES.values())


@pytest.fixture
def settings() -> Settings:
    return Settings(_env_file=None)


@pytest.fixture
def greedy_settings() -> Settings:
    """Forces the greedy heuristic even on tiny graphs."""
    return Settings(_env_file=None, exhaustive_limit=0, heuristic=Heuristic.MIN_FILL)


@pytest.fixture
def hadamard_circuit():
    return parse_circuit("1\n1 h 0\n")


@pytest.fixture
def hh_cz_circuit():
    return parse_circuit("2\n1 h 0\n1 h 1\n2 cz 0 1\n")


@pytest.fixture
def empty_circuit():
    return parse_circuit("3\n")
