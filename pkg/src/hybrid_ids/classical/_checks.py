from __future__ import annotations

import numpy as np


class SingleClassError(ValueError):
    pass


def check_training_set(X, y) -> tuple[np.ndarray, np.ndarray]:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y)
    if X.shape[0] != y.shape[0]:
        raise ValueError(f"{X.shape[0]} samples but {y.shape[0]} labels")
    if X.shape[0] < 2:
        raise ValueError("need at least two training samples")
    if not np.all(np.isfinite(X)):
        raise ValueError("training features contain non-finite values")
    if not np.all(np.isin(y, (0, 1))):
        raise ValueError("labels must be 0 or 1")
    y = y.astype(np.int64)
    if y.min() == y.max():
        raise SingleClassError(f"training labels contain only class {int(y[0])}")
    return X, y


def sample_weights(y: np.ndarray, class_weight: str | None) -> np.ndarray | None:
    if class_weight in (None, "none"):
        return None
    if class_weight != "balanced":
        raise ValueError(f"unknown class_weight {class_weight!r}")
    counts = np.bincount(y, minlength=2).astype(float)
    per_class = len(y) / (2.0 * counts)
    return per_class[y]
