"""Numeric gate definitions."""

import numpy as np

from qsim.models import GateKind

_SQRT_HALF = np.sqrt(0.5)
_T_PHASE = np.exp(1j * np.pi / 4)

_MATRICES = {
    GateKind.H: np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT_HALF,
    GateKind.T: np.array([[1, 0], [0, _T_PHASE]], dtype=complex),
    GateKind.X_HALF: np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex) / 2,
    GateKind.Y_HALF: np.array([[1 + 1j, -1 - 1j], [1 + 1j, 1 + 1j]], dtype=complex) / 2,
    GateKind.CZ: np.diag([1, 1, 1, -1]).astype(complex),
}


def gate_matrix(kind: GateKind) -> np.ndarray:
    """Full unitary of a gate: 2x2, or 4x4 over (q1, q2) with q1 most significant."""
    return _MATRICES[kind].copy()


def gate_tensor(kind: GateKind) -> np.ndarray:
    """
    Factor data of a gate in graphical-model form.

    Diagonal gates keep only their diagonal, so they occupy smaller cliques:
    - T: length-2 vector [1, e^{i pi/4}] over the qubit variable
    - CZ: 2x2 array F[a][b] over the two qubit variables, -1 iff a = b = 1
    - H, XHalf, YHalf: the 2x2 matrix M[out, in]
    """
    matrix = _MATRICES[kind]
    if kind is GateKind.T:
        return np.diag(matrix).copy()
    if kind is GateKind.CZ:
        return np.diag(matrix).reshape(2, 2).copy()
    return matrix.copy()


def basis_vector(bit: int) -> np.ndarray:
    """<0| or <1| as a vector factor."""
    vec = np.zeros(2, dtype=complex)
    vec[bit] = 1
    return vec
