"""Dense-matrix oracle for very small systems (n <= 3 in the tests).

Qubit 1 is the leftmost tensor factor.
"""

from __future__ import annotations

from functools import reduce
from typing import Sequence

import numpy as np

from .pauli import PauliOperator

_I = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_MATS = {"I": _I, "X": _X, "Y": _Y, "Z": _Z}


def letter_matrix(letter: str) -> np.ndarray:
    return _MATS[letter]


def pauli_matrix(p: PauliOperator) -> np.ndarray:
    mats = [_MATS[p.letter(q)] for q in range(p.n)]
    m = reduce(np.kron, mats) if mats else np.eye(1, dtype=complex)
    return (1j ** p.phase) * m


def rewire_unitary(g: PauliOperator, gp: PauliOperator) -> np.ndarray:
    """U = (1 + g' g) / sqrt(2)."""
    dim = 1 << g.n
    return (np.eye(dim) + pauli_matrix(gp) @ pauli_matrix(g)) / np.sqrt(2)


def conjugate(u: np.ndarray, p: PauliOperator) -> np.ndarray:
    return u @ pauli_matrix(p) @ u.conj().T


def state_vector(stabilizers: Sequence[PauliOperator]) -> np.ndarray:
    """Normalised joint +1 eigenvector of a complete stabilizer list."""
    n = stabilizers[0].n
    dim = 1 << n
    proj = np.eye(dim, dtype=complex)
    for s in stabilizers:
        proj = proj @ (np.eye(dim) + pauli_matrix(s)) / 2
    # the projector has rank one; its largest column is the state
    col = int(np.argmax(np.linalg.norm(proj, axis=0)))
    v = proj[:, col]
    return v / np.linalg.norm(v)


def equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-10) -> bool:
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    overlap = np.vdot(a, b)
    if abs(overlap) < tol:
        return False
    return bool(np.allclose(a * (overlap / abs(overlap)), b, atol=tol))
