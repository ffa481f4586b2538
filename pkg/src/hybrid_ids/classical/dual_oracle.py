"""Reference SVM dual solver for small problems: projected gradient ascent.

Independent of the SMO path. Each step moves along the dual gradient with
step ``1 / L`` (L the largest eigenvalue of the label-signed kernel matrix)
and projects back onto ``{0 <= a <= C, y.a = 0}`` by bisection on the
multiplier of the equality constraint.
"""

from __future__ import annotations

import numpy as np

from .kernels import KernelSpec, kernel_matrix


def project(z: np.ndarray, ys: np.ndarray, C: float) -> np.ndarray:
    """Euclidean projection of ``z`` onto the box intersected with ``ys . a = 0``.

    ``r(mu) = ys . clip(z - mu ys, 0, C)`` is piecewise linear and
    non-increasing in ``mu``; its root is located exactly among the
    breakpoints and interpolated.
    """

    def resid(mu):
        return np.clip(z[None, :] - mu[:, None] * ys[None, :], 0.0, C) @ ys

    knots = np.unique(np.concatenate([z * ys, (z - C) * ys]))
    r = resid(knots)
    if r[0] <= 0.0:
        mu = knots[0]
    elif r[-1] >= 0.0:
        mu = knots[-1]
    else:
        k = int(np.flatnonzero(r <= 0.0)[0])
        m0, m1, r0, r1 = knots[k - 1], knots[k], r[k - 1], r[k]
        mu = m0 + (m1 - m0) * r0 / (r0 - r1)
    return np.clip(z - mu * ys, 0.0, C)


def solve_dual(X, y, C: float, kernel: KernelSpec, max_iter: int = 50_000, window: int = 200):
    """Return ``(alpha, objective)`` for the SVM dual, labels 0/1.

    Stops once the objective has not improved by more than 1e-15 (relative)
    over ``window`` consecutive iterations.
    """
    ys = np.where(np.asarray(y) == 1, 1.0, -1.0)
    K = kernel_matrix(kernel, X, X)
    Q = K * np.outer(ys, ys)
    L = max(float(np.linalg.eigvalsh(Q).max()), 1e-12)
    alpha = np.zeros(len(ys))
    # accelerated projected gradient (FISTA), momentum reset on objective decrease
    z = alpha.copy()
    t = 1.0
    obj = 0.0
    history = [obj]
    for _ in range(max_iter):
        new = project(z + (1.0 - Q @ z) / L, ys, C)
        new_obj = new.sum() - 0.5 * new @ Q @ new
        if new_obj < obj:
            z, t = alpha.copy(), 1.0
        else:
            t_next = 0.5 * (1 + np.sqrt(1 + 4 * t * t))
            z = new + ((t - 1) / t_next) * (new - alpha)
            alpha, t, obj = new, t_next, new_obj
        history.append(obj)
        if len(history) > window and obj - history[-window - 1] <= 1e-15 * max(1.0, abs(obj)):
            break
    return alpha, float(alpha.sum() - 0.5 * alpha @ Q @ alpha)
