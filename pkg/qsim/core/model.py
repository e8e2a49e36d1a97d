"""Lowering circuits to graphical models (variables as nodes, tensors as cliques)."""

import itertools
import logging
from collections.abc import Iterable, Mapping

import networkx as nx
from pydantic import BaseModel, ConfigDict

from qsim.core.tensor import DenseTensor
from qsim.data.gates import basis_vector, gate_tensor
from qsim.models import Circuit

log = logging.getLogger(__name__)


class ModelError(ValueError):
    """Inconsistent batch/fixed qubit assignment."""


class Variable(BaseModel):
    """Binary index variable: the state of `qubit` after `generation` basis changes."""
    model_config = ConfigDict(frozen=True)

    id: int
    qubit: int
    generation: int


class Factor(BaseModel):
    """A tensor of the network; a clique over its variables in the graph."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    tensor: DenseTensor

    @property
    def vars(self) -> tuple[int, ...]:
        return self.tensor.vars


class GraphicalModel(BaseModel):
    """
    Graphical model of a circuit amplitude expression.

    Self-loops (vector and diagonal single-variable factors) live only in
    `factors`; `graph` holds the cliques of factors with two variables.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n_qubits: int
    variables: tuple[Variable, ...]
    factors: tuple[Factor, ...]
    graph: nx.Graph
    free_vars: tuple[int, ...]  # ordered by qubit
    fixed_outputs: dict[int, int]  # qubit -> bit
    final_vars: tuple[int, ...]  # last variable of every qubit

    def variable(self, var_id: int) -> Variable:
        return self.variables[var_id]

    def free_var_of(self, qubit: int) -> int:
        return self.final_vars[qubit]


def build_model(
    circuit: Circuit,
    batch_qubits: Iterable[int] = (),
    fixed_bits: Mapping[int, int] | None = None,
) -> GraphicalModel:
    """
    Build the graphical model of <x|U|0> with the batch qubits left open.

    Every qubit starts at a generation-0 variable carrying <0|. Diagonal gates
    (T, CZ) attach factors to the current variables; non-diagonal gates open a
    new variable and attach their matrix over (old, new). Fixed qubits close
    with <x_i|, batch qubits keep their final variable free.
    """
    batch = sorted(set(batch_qubits))
    fixed = dict(fixed_bits or {})
    _check_partition(circuit.n_qubits, batch, fixed)

    variables: list[Variable] = []
    factors: list[Factor] = []
    current: list[int] = []

    def new_variable(qubit: int, generation: int) -> int:
        var = Variable(id=len(variables), qubit=qubit, generation=generation)
        variables.append(var)
        return var.id

    for q in range(circuit.n_qubits):
        v = new_variable(q, 0)
        current.append(v)
        factors.append(Factor(name=f"in_{q}", tensor=DenseTensor(vars=(v,), data=basis_vector(0))))

    for idx, gate in enumerate(circuit.gates):
        name = f"{gate.kind.value}_{idx}"
        data = gate_tensor(gate.kind)
        if gate.kind.is_diagonal:
            vars_ = tuple(current[q] for q in gate.qubits)
            factors.append(Factor(name=name, tensor=DenseTensor(vars=vars_, data=data)))
            continue
        (q,) = gate.qubits
        old = current[q]
        new = new_variable(q, variables[old].generation + 1)
        current[q] = new
        # data is M[new, old]; the factor is indexed (old, new)
        factors.append(Factor(name=name, tensor=DenseTensor(vars=(old, new), data=data.T)))

    for q, bit in sorted(fixed.items()):
        factors.append(
            Factor(name=f"out_{q}", tensor=DenseTensor(vars=(current[q],), data=basis_vector(bit)))
        )

    graph = nx.Graph()
    graph.add_nodes_from(range(len(variables)))
    for factor in factors:
        graph.add_edges_from(itertools.combinations(factor.vars, 2))

    model = GraphicalModel(
        n_qubits=circuit.n_qubits,
        variables=tuple(variables),
        factors=tuple(factors),
        graph=graph,
        free_vars=tuple(current[q] for q in batch),
        fixed_outputs=fixed,
        final_vars=tuple(current),
    )
    log.info(
        f"Built graphical model: {graph.number_of_nodes()} variables, "
        f"{graph.number_of_edges()} edges, {len(factors)} factors, {len(batch)} free"
    )
    return model


def _check_partition(n_qubits: int, batch: list[int], fixed: dict[int, int]) -> None:
    for q in list(batch) + list(fixed):
        if not 0 <= q < n_qubits:
            raise ModelError(f"qubit {q} out of range [0, {n_qubits})")
    overlap = set(batch) & set(fixed)
    if overlap:
        raise ModelError(f"qubits {sorted(overlap)} are both batch and fixed")
    missing = set(range(n_qubits)) - set(batch) - set(fixed)
    if missing:
        raise ModelError(f"qubits {sorted(missing)} are neither batch nor fixed")
    for q, bit in fixed.items():
        if bit not in (0, 1):
            raise ModelError(f"output bit of qubit {q} must be 0 or 1, got {bit}")


def model_graph_stats(model: GraphicalModel) -> tuple[int, int, int]:
    """(n_vars, n_edges, n_factors)"""
    return (
        model.graph.number_of_nodes(),
        model.graph.number_of_edges(),
        len(model.factors),
    )


def factor_scopes(model: GraphicalModel) -> list[tuple[int, ...]]:
    return [f.vars for f in model.factors]


def bits_to_fixed(bitstring: str | Iterable[int], n_qubits: int) -> dict[int, int]:
    """'0110' or [0, 1, 1, 0] -> {qubit: bit}; qubit 0 is the leftmost position."""
    bits = [int(b) for b in bitstring]
    if len(bits) != n_qubits:
        raise ModelError(f"bitstring has {len(bits)} bits, circuit has {n_qubits} qubits")
    if any(b not in (0, 1) for b in bits):
        raise ModelError(f"bitstring must contain only 0 and 1, got {bits}")
    return dict(enumerate(bits))


# Edge-list interop (DIMACS-style, 1-based vertices)

def write_edge_list(graph: nx.Graph) -> str:
    nodes = sorted(graph.nodes)
    number = {v: i + 1 for i, v in enumerate(nodes)}
    lines = [f"p {len(nodes)} {graph.number_of_edges()}"]
    for u, v in sorted(tuple(sorted((number[a], number[b]))) for a, b in graph.edges):
        lines.append(f"e {u} {v}")
    return "\n".join(lines) + "\n"


def read_edge_list(text: str) -> nx.Graph:
    """Parse `p n m` / `e u v` lines back into a graph over 0-based vertices."""
    graph = nx.Graph()
    expected_edges = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens or tokens[0] == "c":
            continue
        if tokens[0] == "p":
            n_vars, expected_edges = int(tokens[-2]), int(tokens[-1])
            graph.add_nodes_from(range(n_vars))
        elif tokens[0] == "e" and len(tokens) == 3:
            graph.add_edge(int(tokens[1]) - 1, int(tokens[2]) - 1)
        else:
            raise ModelError(f"line {line_no}: malformed edge-list line {raw!r}")
    if expected_edges is not None and graph.number_of_edges() != expected_edges:
        raise ModelError(f"expected {expected_edges} edges, read {graph.number_of_edges()}")
    return graph
