"""Dense statevector with in-place gate kernels.

Qubit 0 is the most significant bit of the basis index, so a state on qubits
(q0, q1, ..., q_{n-1}) is indexed as ``b0 b1 ... b_{n-1}`` read as a binary
number. Every single-qubit kernel views the amplitude buffer as a
``(2**q, 2, 2**(n-q-1))`` array and updates the two slices along the middle
axis without copying the buffer.
"""

from __future__ import annotations

import math

import numpy as np

MAX_QUBITS = 12


class QuantumState:
    __slots__ = ("n_qubits", "amplitudes")

    def __init__(self, n_qubits: int, amplitudes: np.ndarray | None = None):
        if not isinstance(n_qubits, (int, np.integer)) or not 1 <= n_qubits <= MAX_QUBITS:
            raise ValueError(f"n_qubits must be in 1..{MAX_QUBITS}, got {n_qubits}")
        self.n_qubits = int(n_qubits)
        if amplitudes is None:
            amplitudes = np.zeros(1 << self.n_qubits, dtype=np.complex128)
            amplitudes[0] = 1.0
        else:
            amplitudes = np.array(amplitudes, dtype=np.complex128)
            if amplitudes.shape != (1 << self.n_qubits,):
                raise ValueError(f"expected {1 << self.n_qubits} amplitudes, got {amplitudes.shape}")
        self.amplitudes = amplitudes

    def copy(self) -> "QuantumState":
        return QuantumState(self.n_qubits, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def _split(self, qubit: int) -> np.ndarray:
        if not 0 <= qubit < self.n_qubits:
            raise IndexError(f"qubit {qubit} out of range for {self.n_qubits} qubits")
        return self.amplitudes.reshape(1 << qubit, 2, 1 << (self.n_qubits - qubit - 1))

    def __repr__(self):
        return f"QuantumState(n_qubits={self.n_qubits})"


def new_state(n_qubits: int) -> QuantumState:
    return QuantumState(n_qubits)


def apply_1q(state: QuantumState, qubit: int, m: np.ndarray) -> QuantumState:
    """Apply an arbitrary 2x2 matrix to ``qubit`` in place."""
    v = state._split(qubit)
    a0 = v[:, 0, :].copy()
    a1 = v[:, 1, :]
    v[:, 0, :] = m[0, 0] * a0 + m[0, 1] * a1
    v[:, 1, :] = m[1, 0] * a0 + m[1, 1] * a1
    return state


def apply_ry(state: QuantumState, qubit: int, theta: float) -> QuantumState:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    v = state._split(qubit)
    a0 = v[:, 0, :].copy()
    a1 = v[:, 1, :]
    v[:, 0, :] = c * a0 - s * a1
    v[:, 1, :] = s * a0 + c * a1
    return state


def apply_rz(state: QuantumState, qubit: int, phi: float) -> QuantumState:
    v = state._split(qubit)
    v[:, 0, :] *= complex(math.cos(phi / 2), -math.sin(phi / 2))
    v[:, 1, :] *= complex(math.cos(phi / 2), math.sin(phi / 2))
    return state


def rot_matrix(phi: float, theta: float, omega: float) -> np.ndarray:
    """RZ(omega) @ RY(theta) @ RZ(phi) as a single 2x2 matrix."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [
            [np.exp(-0.5j * (phi + omega)) * c, -np.exp(0.5j * (phi - omega)) * s],
            [np.exp(-0.5j * (phi - omega)) * s, np.exp(0.5j * (phi + omega)) * c],
        ]
    )


def apply_rot(state: QuantumState, qubit: int, phi: float, theta: float, omega: float) -> QuantumState:
    return apply_1q(state, qubit, rot_matrix(phi, theta, omega))


def apply_cnot(state: QuantumState, control: int, target: int) -> QuantumState:
    n = state.n_qubits
    for q in (control, target):
        if not 0 <= q < n:
            raise IndexError(f"qubit {q} out of range for {n} qubits")
    if control == target:
        raise ValueError("control and target must differ")
    v = state.amplitudes.reshape((2,) * n)
    i10 = [slice(None)] * n
    i11 = [slice(None)] * n
    i10[control] = i11[control] = 1
    i10[target], i11[target] = 0, 1
    i10, i11 = tuple(i10), tuple(i11)
    tmp = v[i10].copy()
    v[i10] = v[i11]
    v[i11] = tmp
    return state


def probabilities(state: QuantumState) -> np.ndarray:
    return np.abs(state.amplitudes) ** 2


def expval_z(state: QuantumState, qubit: int) -> float:
    if not 0 <= qubit < state.n_qubits:
        raise IndexError(f"qubit {qubit} out of range for {state.n_qubits} qubits")
    p = probabilities(state).reshape(1 << qubit, 2, -1)
    return float(p[:, 0, :].sum() - p[:, 1, :].sum())


def expval_z_all(state: QuantumState) -> np.ndarray:
    p = probabilities(state)
    out = np.empty(state.n_qubits)
    for q in range(state.n_qubits):
        v = p.reshape(1 << q, 2, -1)
        out[q] = v[:, 0, :].sum() - v[:, 1, :].sum()
    return out


def run_gates(state: QuantumState, gates) -> QuantumState:
    """Apply a sequence of gate descriptors, see :mod:`hybrid_ids.quantum.oracle`."""
    for g in gates:
        name = g[0]
        if name == "ry":
            apply_ry(state, g[1], g[2])
        elif name == "rz":
            apply_rz(state, g[1], g[2])
        elif name == "rot":
            apply_rot(state, g[1], g[2], g[3], g[4])
        elif name == "cnot":
            apply_cnot(state, g[1], g[2])
        else:
            raise ValueError(f"unknown gate {name!r}")
    return state
