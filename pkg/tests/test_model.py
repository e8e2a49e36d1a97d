"""Lowering circuits to graphical models."""

import numpy as np
import pytest

from qsim.core.model import (
    ModelError,
    bits_to_fixed,
    build_model,
    factor_scopes,
    model_graph_stats,
    read_edge_list,
    write_edge_list,
)
from qsim.data.circuits import generate_random_circuit, parse_circuit


def test_stats_of_empty_circuit():
    circuit = parse_circuit("1\n")
    assert model_graph_stats(build_model(circuit, (), {0: 0})) == (1, 0, 2)


def test_stats_of_two_hadamards():
    circuit = parse_circuit("1\n1 h 0\n2 h 0\n")
    assert model_graph_stats(build_model(circuit, (), {0: 1})) == (3, 2, 4)


def test_stats_of_generated_grid():
    circuit = generate_random_circuit(2, 5, 0)
    n_vars, n_edges, n_factors = model_graph_stats(build_model(circuit, (), dict.fromkeys(range(4), 0)))
    assert circuit.n_qubits == 4
    assert n_vars == circuit.n_qubits + circuit.count_non_diagonal()
    assert n_factors == 2 * circuit.n_qubits + len(circuit.gates)
    assert n_edges >= circuit.count_non_diagonal()


def test_diagonal_gates_add_no_variables():
    circuit = parse_circuit("2\n1 h 0\n1 h 1\n2 cz 0 1\n3 t 0\n")
    model = build_model(circuit, (), {0: 0, 1: 0})
    n_vars, n_edges, n_factors = model_graph_stats(model)
    assert n_vars == 4
    # H edges (0,2) and (1,3), CZ edge (2,3); T is a self-loop kept only as a factor
    assert n_edges == 3
    assert n_factors == 2 + 3 + 1 + 2
    assert all(u != v for u, v in model.graph.edges)


@pytest.mark.parametrize("seed", range(5))
def test_variable_count_matches_non_diagonal_gates(seed):
    circuit = generate_random_circuit(3, 9, seed)
    model = build_model(circuit, range(2), {q: 0 for q in range(2, 9)})
    assert len(model.variables) == circuit.n_qubits + circuit.count_non_diagonal()
    assert [v.id for v in model.variables] == list(range(len(model.variables)))
    assert len({(v.qubit, v.generation) for v in model.variables}) == len(model.variables)


def test_factor_cliques_are_graph_edges():
    circuit = generate_random_circuit(2, 8, seed=1)
    model = build_model(circuit, (), dict.fromkeys(range(4), 0))
    for scope in factor_scopes(model):
        assert 1 <= len(scope) <= 2
        if len(scope) == 2:
            assert model.graph.has_edge(*scope)


def test_non_diagonal_factor_is_transposed_matrix():
    circuit = parse_circuit("1\n1 x_1_2 0\n")
    model = build_model(circuit, (), {0: 0})
    gate = next(f for f in model.factors if f.name.startswith("x_1_2"))
    assert gate.vars == (0, 1)
    m = np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]]) / 2
    # factor[old, new] == M[new, old]
    assert np.allclose(gate.tensor.data, m.T)


def test_output_vectors():
    circuit = parse_circuit("2\n1 h 0\n")
    model = build_model(circuit, (), {0: 1, 1: 0})
    outputs = {f.name: f for f in model.factors if f.name.startswith("out_")}
    assert np.allclose(outputs["out_0"].tensor.data, [0, 1])
    assert np.allclose(outputs["out_1"].tensor.data, [1, 0])
    assert outputs["out_0"].vars == (model.free_var_of(0),)


def test_free_variables_are_final_variables_in_qubit_order():
    circuit = parse_circuit("3\n1 h 2\n1 h 0\n2 h 2\n")
    model = build_model(circuit, [2, 0], {1: 0})
    assert model.free_vars == (model.final_vars[0], model.final_vars[2])
    assert model.variable(model.free_vars[1]).generation == 2
    assert not any(f.name == "out_0" or f.name == "out_2" for f in model.factors)


@pytest.mark.parametrize(
    "batch, fixed",
    [
        ([0], {0: 0, 1: 0}),       # overlap
        ([0], {}),                 # qubit 1 missing
        ([0, 1, 2], {}),           # out of range
        ([], {0: 2, 1: 0}),        # not a bit
    ],
)
def test_bad_partitions(batch, fixed):
    circuit = parse_circuit("2\n1 h 0\n")
    with pytest.raises(ModelError):
        build_model(circuit, batch, fixed)


def test_bits_to_fixed():
    assert bits_to_fixed("0110", 4) == {0: 0, 1: 1, 2: 1, 3: 0}
    assert bits_to_fixed([1, 0], 2) == {0: 1, 1: 0}
    with pytest.raises(ModelError):
        bits_to_fixed("01", 3)
    with pytest.raises(ModelError):
        bits_to_fixed("0121", 4)


def test_edge_list_format(example_graph):
    text = write_edge_list(example_graph)
    lines = text.splitlines()
    assert lines[0] == "p 6 8"
    assert lines[1] == "e 1 2"
    assert len(lines) == 9
    assert text.endswith("\n")


def test_edge_list_read_back(example_graph):
    graph = read_edge_list("c a comment\n" + write_edge_list(example_graph))
    assert set(graph.nodes) == set(example_graph.nodes)
    assert {frozenset(e) for e in graph.edges} == {frozenset(e) for e in example_graph.edges}


def test_edge_list_errors():
    with pytest.raises(ModelError, match="expected 2 edges"):
        read_edge_list("p 3 2\ne 1 2\n")
    with pytest.raises(ModelError, match="line 2"):
        read_edge_list("p 3 1\nx 1 2\n")
