"""Brute-force state-vector simulation, used to cross-check the bucket engine."""

from collections.abc import Iterable, Iterator

import numpy as np

from qsim.data.gates import gate_matrix
from qsim.models import Circuit

MAX_QUBITS = 20


class OracleError(ValueError):
    """Circuit too large for a full state vector, or a malformed bitstring."""


def _apply(state: np.ndarray, matrix: np.ndarray, qubits: tuple[int, ...]) -> np.ndarray:
    k = len(qubits)
    moved = np.moveaxis(state, qubits, tuple(range(k)))
    shape = moved.shape
    updated = (matrix @ moved.reshape(2**k, -1)).reshape(shape)
    return np.moveaxis(updated, tuple(range(k)), qubits)


def iter_states(circuit: Circuit, max_qubits: int = MAX_QUBITS) -> Iterator[np.ndarray]:
    """Yield the flat state after every gate, in cycle order. Qubit 0 is the leading bit."""
    n = circuit.n_qubits
    if n > max_qubits:
        raise OracleError(f"{n} qubits exceed the state-vector limit of {max_qubits}")

    state = np.zeros((2,) * n, dtype=complex)
    state[(0,) * n] = 1
    for gate in circuit.gates:
        state = _apply(state, gate_matrix(gate.kind), gate.qubits)
        yield state.reshape(-1).copy()


def evolve(circuit: Circuit, max_qubits: int = MAX_QUBITS) -> np.ndarray:
    """Final state U|0...0> as a vector of length 2^n."""
    if circuit.n_qubits > max_qubits:
        raise OracleError(f"{circuit.n_qubits} qubits exceed the state-vector limit of {max_qubits}")
    state = np.zeros(2**circuit.n_qubits, dtype=complex)
    state[0] = 1
    for state in iter_states(circuit, max_qubits):
        pass
    return state


def amplitude_of(state: np.ndarray, bitstring: str | Iterable[int]) -> complex:
    bits = [int(b) for b in bitstring]
    if 2 ** len(bits) != len(state):
        raise OracleError(f"bitstring of length {len(bits)} does not index a state of {len(state)}")
    if any(b not in (0, 1) for b in bits):
        raise OracleError(f"bitstring must contain only 0 and 1, got {bits}")
    index = int("".join(map(str, bits)), 2) if bits else 0
    return complex(state[index])
