"""Brute-force dense-unitary reference for small circuits.

Deliberately shares no code with the in-place kernels: each gate is expanded
to a full ``2**n x 2**n`` matrix by Kronecker products (qubit 0 leftmost) and
the circuit unitary is the left-multiplied product in application order.

Gate descriptors are tuples:

    ("ry", q, theta)    ("rz", q, phi)
    ("rot", q, phi, theta, omega)    ("cnot", control, target)
"""

from __future__ import annotations

from functools import reduce

import numpy as np

MAX_ORACLE_QUBITS = 4

_I = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_P0 = np.array([[1, 0], [0, 0]], dtype=complex)
_P1 = np.array([[0, 0], [0, 1]], dtype=complex)


def ry(theta: float) -> np.ndarray:
    return np.array(
        [[np.cos(theta / 2), -np.sin(theta / 2)], [np.sin(theta / 2), np.cos(theta / 2)]], dtype=complex
    )


def rz(phi: float) -> np.ndarray:
    return np.diag([np.exp(-1j * phi / 2), np.exp(1j * phi / 2)])


def _kron_all(mats) -> np.ndarray:
    return reduce(np.kron, mats)


def embed_1q(m: np.ndarray, qubit: int, n: int) -> np.ndarray:
    return _kron_all([m if k == qubit else _I for k in range(n)])


def embed_cnot(control: int, target: int, n: int) -> np.ndarray:
    off = _kron_all([_P0 if k == control else _I for k in range(n)])
    on = _kron_all([_P1 if k == control else _X if k == target else _I for k in range(n)])
    return off + on


def gate_matrix(gate: tuple, n: int) -> np.ndarray:
    name = gate[0]
    if name == "ry":
        return embed_1q(ry(gate[2]), gate[1], n)
    if name == "rz":
        return embed_1q(rz(gate[2]), gate[1], n)
    if name == "rot":
        _, q, phi, theta, omega = gate
        return embed_1q(rz(omega) @ ry(theta) @ rz(phi), q, n)
    if name == "cnot":
        if gate[1] == gate[2]:
            raise ValueError("control and target must differ")
        return embed_cnot(gate[1], gate[2], n)
    raise ValueError(f"unknown gate {name!r}")


def dense_unitary_oracle(gates, n_qubits: int) -> np.ndarray:
    if not 1 <= n_qubits <= MAX_ORACLE_QUBITS:
        raise ValueError(f"dense oracle supports 1..{MAX_ORACLE_QUBITS} qubits, got {n_qubits}")
    u = np.eye(1 << n_qubits, dtype=complex)
    for g in gates:
        u = gate_matrix(g, n_qubits) @ u
    return u


def oracle_expval_z(psi: np.ndarray, qubit: int, n: int) -> float:
    z = embed_1q(np.diag([1.0, -1.0]).astype(complex), qubit, n)
    return float(np.real(np.conj(psi) @ z @ psi))
