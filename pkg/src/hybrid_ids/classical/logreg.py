"""Binary logistic regression trained by full-batch gradient descent."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._checks import check_training_set, sample_weights


@dataclass
class LogRegModel:
    weights: np.ndarray
    bias: float
    meta: dict = field(default_factory=dict)

    def decision_function(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.weights.size:
            raise ValueError(f"expected {self.weights.size} features, got {X.shape[1]}")
        return X @ self.weights + self.bias

    def predict_proba(self, X) -> np.ndarray:
        return sigmoid(self.decision_function(X))

    def predict(self, X) -> np.ndarray:
        return (self.predict_proba(X) >= 0.5).astype(np.int64)


def sigmoid(z):
    z = np.asarray(z, dtype=float)
    # split by sign so exp never overflows
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out if out.ndim else float(out)


def loss_and_grad(w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray, sw: np.ndarray | None = None):
    """Mean (optionally sample-weighted) binary cross-entropy and its gradient."""
    z = X @ w + b
    if sw is None:
        sw = np.ones(len(y))
    norm = sw.sum()
    # log(1 + e^z) - y z, written stably
    loss = float((sw * (np.logaddexp(0.0, z) - y * z)).sum() / norm)
    r = sw * (sigmoid(z) - y) / norm
    return loss, X.T @ r, float(r.sum())


def train_logreg(
    X,
    y,
    lr: float = 0.1,
    epochs: int = 1000,
    seed: int = 0,
    class_weight: str | None = None,
) -> LogRegModel:
    """Gradient descent from zero initialisation.

    The iteration is fully deterministic; ``seed`` is carried in the model
    metadata so every classifier in a run records the same seed lineage.
    """
    X, y = check_training_set(X, y)
    if not lr > 0 or epochs < 1:
        raise ValueError("lr must be positive and epochs >= 1")
    sw = sample_weights(y, class_weight)
    w = np.zeros(X.shape[1])
    b = 0.0
    yf = y.astype(float)
    loss = float("nan")
    for _ in range(epochs):
        loss, gw, gb = loss_and_grad(w, b, X, yf, sw)
        w -= lr * gw
        b -= lr * gb
    if not (np.all(np.isfinite(w)) and np.isfinite(b)):
        raise FloatingPointError("logistic regression diverged; lower the learning rate")
    meta = {"lr": lr, "epochs": epochs, "seed": seed, "class_weight": class_weight or "none", "final_loss": loss}
    return LogRegModel(w, float(b), meta)


def predict_logreg(m: LogRegModel, x) -> tuple[int, float]:
    x = np.asarray(x, dtype=float)
    if x.shape != m.weights.shape:
        raise ValueError(f"expected {m.weights.size} features, got {x.size}")
    p = sigmoid(float(x @ m.weights) + m.bias)
    return int(p >= 0.5), p
