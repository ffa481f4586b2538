"""Angle-encoded, strongly-entangling embedding circuit with Pauli-Z readout."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .statevector import (
    QuantumState,
    apply_cnot,
    apply_rot,
    apply_ry,
    expval_z_all,
    new_state,
)


@dataclass(frozen=True)
class VqcWeights:
    """Euler angles (phi, theta, omega) per layer and qubit, shape ``(depth, n_qubits, 3)``."""

    angles: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        a = np.asarray(self.angles, dtype=float)
        if a.ndim != 3 or a.shape[2] != 3 or a.shape[0] < 1 or a.shape[1] < 1:
            raise ValueError(f"weights must have shape (depth, n_qubits, 3), got {a.shape}")
        a = a.copy()
        a.flags.writeable = False
        object.__setattr__(self, "angles", a)

    @property
    def depth(self) -> int:
        return self.angles.shape[0]

    @property
    def n_qubits(self) -> int:
        return self.angles.shape[1]


def init_weights(n_qubits: int, depth: int, seed: int) -> VqcWeights:
    if n_qubits < 1 or depth < 1:
        raise ValueError("n_qubits and depth must both be >= 1")
    rng = np.random.default_rng(seed)
    return VqcWeights(rng.uniform(0.0, 2 * math.pi, size=(depth, n_qubits, 3)), seed)


def entangling_range(layer: int, n_qubits: int) -> int:
    return (layer % (n_qubits - 1)) + 1


def angle_encode(state: QuantumState, x, angle_scale: float = 1.0) -> QuantumState:
    x = np.asarray(x, dtype=float)
    if x.shape != (state.n_qubits,):
        raise ValueError(f"feature vector of length {x.size} for {state.n_qubits} qubits")
    for q, v in enumerate(x):
        apply_ry(state, q, angle_scale * v)
    return state


def apply_strongly_entangling(state: QuantumState, w: VqcWeights) -> QuantumState:
    n = state.n_qubits
    if w.n_qubits != n:
        raise ValueError(f"weights for {w.n_qubits} qubits applied to a {n}-qubit state")
    for layer in range(w.depth):
        for q in range(n):
            phi, theta, omega = w.angles[layer, q]
            apply_rot(state, q, phi, theta, omega)
        if n > 1:
            r = entangling_range(layer, n)
            for q in range(n):
                apply_cnot(state, q, (q + r) % n)
    return state


def embedding_gates(x, w: VqcWeights | None, angle_scale: float = 1.0) -> list[tuple]:
    """The embedding circuit as a flat list of gate descriptors, in application order."""
    x = np.asarray(x, dtype=float)
    n = x.size
    gates: list[tuple] = [("ry", q, angle_scale * float(v)) for q, v in enumerate(x)]
    if w is None:
        return gates
    for layer in range(w.depth):
        for q in range(n):
            gates.append(("rot", q, *map(float, w.angles[layer, q])))
        if n > 1:
            r = entangling_range(layer, n)
            gates.extend(("cnot", q, (q + r) % n) for q in range(n))
    return gates


def embed_state(x, w: VqcWeights | None, angle_scale: float = 1.0) -> QuantumState:
    x = np.asarray(x, dtype=float)
    state = new_state(x.size)
    angle_encode(state, x, angle_scale)
    if w is not None:
        apply_strongly_entangling(state, w)
    return state


def embed(x, w: VqcWeights | None, angle_scale: float = 1.0) -> np.ndarray:
    """Per-qubit Pauli-Z expectations after encoding and the entangling layers.

    ``w=None`` skips the entangling layers, leaving the product state whose
    readout is ``cos(angle_scale * x)``.
    """
    if w is not None and np.size(x) != w.n_qubits:
        raise ValueError(f"feature vector of length {np.size(x)} for {w.n_qubits}-qubit weights")
    return expval_z_all(embed_state(x, w, angle_scale))


def embed_batch(X, w: VqcWeights | None, angle_scale: float = 1.0, workers: int = 1) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if workers <= 1:
        rows = [embed(x, w, angle_scale) for x in X]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda x: embed(x, w, angle_scale), X))
    return np.array(rows).reshape(len(X), X.shape[1])


# -- file formats ----------------------------------------------------------------


def write_weights(w: VqcWeights, path) -> None:
    lines = [
        f"# depth={w.depth} n_qubits={w.n_qubits} seed={w.seed}",
        "# order: layer-major, qubit-major, (phi, theta, omega)",
    ]
    lines += [repr(float(a)) for a in w.angles.reshape(-1)]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_weights(path) -> VqcWeights:
    header: dict[str, str] = {}
    values = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line.startswith("#"):
                for tok in line[1:].split():
                    if "=" in tok:
                        k, v = tok.split("=", 1)
                        header[k] = v
            elif line:
                values.append(float(line))
    depth, n = int(header["depth"]), int(header["n_qubits"])
    seed = None if header.get("seed", "None") == "None" else int(header["seed"])
    return VqcWeights(np.array(values).reshape(depth, n, 3), seed)


def write_embeddings(E: np.ndarray, y, path, depth: int, seed, angle_scale: float) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# n_qubits={E.shape[1]} depth={depth} seed={seed} angle_scale={angle_scale!r}\n")
        for row, label in zip(E, y):
            fh.write(",".join(repr(float(v)) for v in row) + f",{int(label)}\n")


def read_embeddings(path) -> tuple[np.ndarray, np.ndarray]:
    rows, labels = [], []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            *vals, label = line.split(",")
            rows.append([float(v) for v in vals])
            labels.append(int(label))
    return np.array(rows), np.array(labels, dtype=np.int64)
