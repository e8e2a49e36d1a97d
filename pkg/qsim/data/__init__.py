"""Circuit definitions: gate numerics, the text format and the random generator."""

from qsim.data.circuits import (
    CircuitError,
    generate_random_circuit,
    load_circuit,
    parse_circuit,
    render_circuit,
    save_circuit,
)
from qsim.data.gates import gate_matrix, gate_tensor

__all__ = [
    "CircuitError",
    "generate_random_circuit",
    "load_circuit",
    "parse_circuit",
    "render_circuit",
    "save_circuit",
    "gate_matrix",
    "gate_tensor",
]
