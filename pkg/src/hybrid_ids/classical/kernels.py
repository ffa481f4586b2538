from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class KernelSpec:
    kind: str = "linear"
    gamma: float | None = None

    def __post_init__(self):
        if self.kind not in ("linear", "rbf"):
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.kind == "rbf" and (self.gamma is None or not self.gamma > 0):
            raise ValueError("rbf kernel requires gamma > 0")

    def describe(self) -> str:
        return "linear" if self.kind == "linear" else f"rbf(gamma={self.gamma!r})"


def kernel_eval(k: KernelSpec, a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    if k.kind == "linear":
        return float(a @ b)
    d = a - b
    return float(np.exp(-k.gamma * (d @ d)))


def kernel_matrix(k: KernelSpec, A, B) -> np.ndarray:
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if A.shape[1] != B.shape[1]:
        raise ValueError(f"dimension mismatch: {A.shape[1]} vs {B.shape[1]}")
    G = A @ B.T
    if k.kind == "linear":
        return G
    sq = (A * A).sum(1)[:, None] + (B * B).sum(1)[None, :] - 2.0 * G
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-k.gamma * sq)


def gamma_scale(X) -> float:
    """``1 / (n_features * var(X))`` over all entries pooled."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.size == 0:
        raise ValueError("gamma_scale needs a non-empty matrix")
    var = float(X.var())
    if var == 0.0:
        raise ValueError("feature matrix has zero variance; pass an explicit gamma")
    return 1.0 / (X.shape[1] * var)
