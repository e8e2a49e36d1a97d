"""Elimination orders, fill-in graphs and restricted orders."""

import itertools

import networkx as nx
import pytest

from qsim.config import Heuristic
from qsim.core.ordering import (
    EliminationOrder,
    OrderingError,
    build_chordal_graph,
    clique_ify,
    elimination_clique_sizes,
    exhaustive_order,
    fill_edges,
    greedy_order,
    is_chordal,
    mcs_order,
    minimal_triangulation,
    restricted_mcs,
    restricted_order_pipeline,
    treewidth_of_order,
)
from tests.helpers import V, random_graph

PI = EliminationOrder(vertices=tuple(V[c] for c in "ijklmn"))
PI_TILDE = EliminationOrder(vertices=tuple(V[c] for c in "kjilmn"))


def test_order_ranks_are_one_based():
    order = EliminationOrder(vertices=(5, 3, 9))
    assert order.rank(5) == 1
    assert order.rank(9) == 3
    assert order.vertex_at(2) == 3
    assert len(order) == 3
    assert 3 in order and 4 not in order


def test_order_errors():
    with pytest.raises(ValueError):
        EliminationOrder(vertices=(1, 1))
    order = EliminationOrder(vertices=(0, 1))
    with pytest.raises(OrderingError):
        order.rank(7)
    with pytest.raises(OrderingError):
        order.vertex_at(3)


def test_order_text_and_ranks():
    order = EliminationOrder.from_text("4 0 2\n1")
    assert order.vertices == (4, 0, 2, 1)
    assert EliminationOrder.from_text(order.to_text()) == order
    assert EliminationOrder.from_ranks({7: 2, 8: 1}).vertices == (8, 7)
    with pytest.raises(OrderingError):
        EliminationOrder.from_ranks({7: 1, 8: 3})
    with pytest.raises(OrderingError):
        EliminationOrder.from_text("1 x")


def test_example_network_clique_sizes(example_graph):
    assert elimination_clique_sizes(example_graph, PI) == [4, 3, 3, 3, 2, 1]
    assert treewidth_of_order(example_graph, PI) == 3


def test_example_network_bad_order(example_graph):
    sizes = elimination_clique_sizes(example_graph, PI_TILDE)
    assert sizes[0] == 5
    assert max(sizes) == 5
    assert treewidth_of_order(example_graph, PI_TILDE) == 4


def test_example_network_fill(example_graph):
    assert fill_edges(example_graph, PI) == [(V["j"], V["l"]), (V["l"], V["m"])]
    assert is_chordal(build_chordal_graph(example_graph, PI))


def test_order_must_match_graph(example_graph):
    with pytest.raises(OrderingError):
        treewidth_of_order(example_graph, EliminationOrder(vertices=(0, 1, 2)))


def test_chordal_graph_contains_original(example_graph):
    fill_in = build_chordal_graph(example_graph, PI_TILDE)
    assert all(fill_in.has_edge(u, v) for u, v in example_graph.edges)
    assert nx.is_chordal(fill_in)


@pytest.mark.parametrize(
    "graph, width",
    [
        (nx.path_graph(6), 1),
        (nx.balanced_tree(2, 3), 1),
        (nx.cycle_graph(7), 2),
        (nx.complete_graph(5), 4),
        (nx.convert_node_labels_to_integers(nx.grid_2d_graph(3, 3)), 3),
    ],
)
@pytest.mark.parametrize("heuristic", list(Heuristic))
def test_greedy_on_known_graphs(graph, width, heuristic):
    order = greedy_order(graph, heuristic)
    assert sorted(order.vertices) == sorted(graph.nodes)
    assert treewidth_of_order(graph, order) == width


def test_min_degree_breaks_ties_by_smallest_id():
    # path 0 - 2 - 1: both endpoints go before the middle vertex
    graph = nx.Graph([(0, 2), (2, 1)])
    assert greedy_order(graph, Heuristic.MIN_DEGREE).vertices == (0, 1, 2)


def test_greedy_rejects_empty_graph():
    with pytest.raises(OrderingError):
        greedy_order(nx.Graph())


def test_greedy_fill_in_is_minimal():
    for seed in range(20):
        graph = random_graph(18, 0.25, seed)
        order = greedy_order(graph)
        fill_in = build_chordal_graph(graph, order)
        minimal = minimal_triangulation(graph, fill_in)
        assert minimal.number_of_edges() == fill_in.number_of_edges()


def test_minimal_triangulation_stays_chordal():
    for seed in range(10):
        graph = random_graph(14, 0.3, seed)
        order = EliminationOrder(vertices=tuple(sorted(graph.nodes, reverse=True)))
        fill_in = build_chordal_graph(graph, order)
        minimal = minimal_triangulation(graph, fill_in)
        assert nx.is_chordal(minimal)
        assert all(minimal.has_edge(u, v) for u, v in graph.edges)
        assert minimal.number_of_edges() <= fill_in.number_of_edges()


@pytest.mark.parametrize(
    "graph, width",
    [
        (nx.cycle_graph(6), 2),
        (nx.convert_node_labels_to_integers(nx.grid_2d_graph(3, 3)), 3),
        (nx.complete_graph(4), 3),
        (nx.empty_graph(3), 0),
        (nx.petersen_graph(), 4),
    ],
)
def test_exhaustive_on_known_graphs(graph, width):
    order = exhaustive_order(graph)
    assert treewidth_of_order(graph, order) == width


def test_exhaustive_size_guard():
    with pytest.raises(OrderingError):
        exhaustive_order(nx.path_graph(13))


def test_exhaustive_never_worse_than_greedy():
    for seed in range(25):
        graph = random_graph(10, 0.4, seed)
        best = treewidth_of_order(graph, exhaustive_order(graph))
        for heuristic in Heuristic:
            assert best <= treewidth_of_order(graph, greedy_order(graph, heuristic))


def test_adding_an_edge_never_lowers_exhaustive_treewidth():
    for seed in range(20):
        graph = random_graph(9, 0.3, seed)
        before = treewidth_of_order(graph, exhaustive_order(graph))
        missing = [e for e in itertools.combinations(range(9), 2) if not graph.has_edge(*e)]
        if not missing:
            continue
        bigger = nx.Graph(graph)
        bigger.add_edge(*missing[seed % len(missing)])
        assert treewidth_of_order(bigger, exhaustive_order(bigger)) >= before


def test_mcs_is_perfect_on_chordal_graphs():
    for seed in range(10):
        graph = random_graph(15, 0.2, seed)
        fill_in = build_chordal_graph(graph, greedy_order(graph))
        assert fill_edges(fill_in, mcs_order(fill_in)) == []


def test_is_chordal_agrees_with_networkx():
    for seed in range(10):
        graph = random_graph(12, 0.3, seed)
        assert is_chordal(graph) == nx.is_chordal(graph)
    assert is_chordal(nx.Graph())


def test_restricted_mcs_puts_clique_last(example_graph):
    fill_in = build_chordal_graph(example_graph, PI)
    order = restricted_mcs(fill_in, [V["m"], V["n"]])
    assert set(order.vertices[-2:]) == {V["m"], V["n"]}
    assert order.vertices[-1] == V["m"]  # smallest id of the clique gets rank |V|
    assert treewidth_of_order(fill_in, order) == 3


def test_restricted_mcs_on_triangle_ranks_clique_vertex_last():
    order = restricted_mcs(nx.complete_graph(3), [1])
    assert order.rank(1) == 3
    assert order.vertices[-1] == 1


def test_restricted_mcs_errors(example_graph):
    fill_in = build_chordal_graph(example_graph, PI)
    with pytest.raises(OrderingError, match="not a clique"):
        restricted_mcs(fill_in, [V["i"], V["n"]])
    with pytest.raises(OrderingError, match="not chordal"):
        restricted_mcs(nx.cycle_graph(4), [0, 1])
    with pytest.raises(OrderingError):
        restricted_mcs(fill_in, [42])


def test_clique_ify(example_graph):
    g_tilde = clique_ify(example_graph, [V["i"], V["m"], V["n"]])
    assert g_tilde.has_edge(V["i"], V["m"]) and g_tilde.has_edge(V["i"], V["n"])
    assert not example_graph.has_edge(V["i"], V["m"])


def test_pipeline_on_example_network(example_graph):
    order, width = restricted_order_pipeline(example_graph, [V["m"], V["n"]])
    assert set(order.vertices[-2:]) == {V["m"], V["n"]}
    assert width == 2


def test_pipeline_without_clique_is_optimal_on_small_graphs(example_graph):
    order, width = restricted_order_pipeline(example_graph, [])
    assert width == 2
    assert treewidth_of_order(example_graph, order) == 2


@pytest.mark.parametrize("exhaustive_limit", [12, 0])
def test_pipeline_with_every_vertex_in_clique(example_graph, exhaustive_limit):
    n = example_graph.number_of_nodes()
    order, width = restricted_order_pipeline(
        example_graph, example_graph.nodes, exhaustive_limit=exhaustive_limit
    )
    assert width == n - 1
    assert sorted(order.vertices) == sorted(example_graph.nodes)


def test_pipeline_large_graph_uses_greedy():
    graph = random_graph(20, 0.2, seed=3)
    clique = [0, 5, 11]
    order, width = restricted_order_pipeline(graph, clique, Heuristic.MIN_DEGREE)
    g_tilde = clique_ify(graph, clique)
    assert set(order.vertices[-3:]) == set(clique)
    assert width == treewidth_of_order(g_tilde, greedy_order(g_tilde, Heuristic.MIN_DEGREE))


def test_pipeline_edge_cases():
    order, width = restricted_order_pipeline(nx.Graph(), [])
    assert len(order) == 0 and width == 0
    with pytest.raises(OrderingError):
        restricted_order_pipeline(nx.path_graph(3), [7])
