"""Circuit text format and the random grid-circuit generator."""

import logging
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from qsim.models import Circuit, GateApplication, GateKind

log = logging.getLogger(__name__)

_GATE_NAMES = {kind.value: kind for kind in GateKind}


class CircuitError(ValueError):
    """Invalid circuit text or generator arguments."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def parse_circuit(text: str) -> Circuit:
    """
    Parse a circuit in the plain-text format.

    The first non-comment line holds the qubit count, every following line is
    `cycle gate q1 [q2]` with 1-based cycles and 0-based qubits. `#` starts a
    comment running to the end of the line; LF and CRLF are both accepted.
    """
    n_qubits: int | None = None
    gates: list[GateApplication] = []
    busy: dict[tuple[int, int], int] = {}

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()

        if n_qubits is None:
            if len(tokens) != 1 or not _is_int(tokens[0]):
                raise CircuitError(f"expected qubit count, got {line!r}", line_no)
            n_qubits = int(tokens[0])
            if n_qubits < 1:
                raise CircuitError("qubit count must be positive", line_no)
            continue

        if len(tokens) < 3:
            raise CircuitError(f"malformed gate line {line!r}", line_no)
        cycle_tok, name, *qubit_toks = tokens
        if not _is_int(cycle_tok) or not all(_is_int(t) for t in qubit_toks):
            raise CircuitError(f"malformed gate line {line!r}", line_no)

        kind = _GATE_NAMES.get(name.lower())
        if kind is None:
            raise CircuitError(f"unknown gate {name!r}", line_no)

        cycle = int(cycle_tok)
        qubits = tuple(int(t) for t in qubit_toks)
        if cycle < 1:
            raise CircuitError(f"cycle must be >= 1, got {cycle}", line_no)
        if len(qubits) != kind.n_qubits:
            raise CircuitError(
                f"gate {kind.value} takes {kind.n_qubits} qubit(s), got {len(qubits)}", line_no
            )
        if len(set(qubits)) != len(qubits):
            raise CircuitError(f"repeated qubit in {name} {list(qubits)}", line_no)
        for q in qubits:
            if not 0 <= q < n_qubits:
                raise CircuitError(f"qubit {q} out of range [0, {n_qubits})", line_no)
            if (cycle, q) in busy:
                raise CircuitError(
                    f"qubit {q} already used in cycle {cycle} (line {busy[(cycle, q)]})", line_no
                )
            busy[(cycle, q)] = line_no

        gates.append(GateApplication(kind=kind, qubits=qubits, cycle=cycle))

    if n_qubits is None:
        raise CircuitError("missing qubit count")

    try:
        return Circuit(n_qubits=n_qubits, gates=tuple(gates))
    except ValidationError as e:
        raise CircuitError(str(e)) from e


def render_circuit(circuit: Circuit) -> str:
    """Inverse of parse_circuit."""
    lines = [str(circuit.n_qubits)]
    for gate in circuit.gates:
        qubits = " ".join(str(q) for q in gate.qubits)
        lines.append(f"{gate.cycle} {gate.kind.value} {qubits}")
    return "\n".join(lines) + "\n"


def load_circuit(path: Path) -> Circuit:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise CircuitError(f"cannot read {path}: {e}") from e
    return parse_circuit(text)


def save_circuit(circuit: Circuit, path: Path) -> None:
    path.write_text(render_circuit(circuit), encoding="utf-8", newline="\n")


def _is_int(token: str) -> bool:
    digits = token.lstrip("+-")
    return digits.isascii() and digits.isdigit()


# Random grid circuits

def grid_neighbors(k: int) -> set[frozenset[int]]:
    """All nearest-neighbour pairs of a k x k grid; qubit (r, c) has index r*k + c."""
    edges = set()
    for r in range(k):
        for c in range(k):
            if c + 1 < k:
                edges.add(frozenset((r * k + c, r * k + c + 1)))
            if r + 1 < k:
                edges.add(frozenset((r * k + c, (r + 1) * k + c)))
    return edges


def cz_stencil(k: int, pattern: int) -> list[tuple[int, int]]:
    """
    One of 8 CZ layouts on a k x k grid.

    Even patterns pair (r, c) with (r, c+1) where (2r + c) % 4 == offset, odd
    patterns pair (r, c) with (r+1, c) where (r + 2c) % 4 == offset, with
    offset = (pattern >> 1) % 4. Every grid edge belongs to exactly one pattern
    and no qubit appears twice within a pattern.
    """
    offset = (pattern >> 1) % 4
    vertical = pattern % 2 == 1
    pairs = []
    for r in range(k):
        for c in range(k):
            if vertical:
                if r + 1 < k and (r + 2 * c) % 4 == offset:
                    pairs.append((r * k + c, (r + 1) * k + c))
            else:
                if c + 1 < k and (2 * r + c) % 4 == offset:
                    pairs.append((r * k + c, r * k + c + 1))
    return pairs


def generate_random_circuit(k: int, d: int, seed: int) -> Circuit:
    """
    Generate a random circuit on a k x k grid with d cycles.

    Cycle 1 applies H everywhere. Cycle t >= 2 applies CZ stencil (t - 2) % 8.
    A qubit that was hit by a CZ in the previous cycle and is idle now gets a
    single-qubit gate: T the first time, then X^1/2 or Y^1/2 with equal odds.
    """
    if k < 2:
        raise CircuitError(f"grid side must be >= 2, got {k}")
    if d < 2:
        raise CircuitError(f"depth must be >= 2, got {d}")

    rng = np.random.default_rng(seed)
    n = k * k
    gates = [GateApplication(kind=GateKind.H, qubits=(q,), cycle=1) for q in range(n)]

    had_t = [False] * n
    previous_cz: set[int] = set()
    for cycle in range(2, d + 1):
        pairs = cz_stencil(k, (cycle - 2) % 8)
        current_cz = {q for pair in pairs for q in pair}

        for a, b in pairs:
            gates.append(GateApplication(kind=GateKind.CZ, qubits=(a, b), cycle=cycle))

        for q in sorted(previous_cz - current_cz):
            if not had_t[q]:
                kind = GateKind.T
                had_t[q] = True
            else:
                kind = GateKind.X_HALF if rng.integers(2) == 0 else GateKind.Y_HALF
            gates.append(GateApplication(kind=kind, qubits=(q,), cycle=cycle))

        previous_cz = current_cz

    circuit = Circuit(n_qubits=n, gates=tuple(gates))
    log.info(f"Generated {k}x{k} circuit, depth {d}, seed {seed}: {len(gates)} gates")
    return circuit
