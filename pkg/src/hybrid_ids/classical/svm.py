"""Soft-margin SVM trained with sequential minimal optimisation (SMO).

The dual problem solved is

    max_a  sum(a) - 1/2 sum_ij a_i a_j y_i y_j K(x_i, x_j)
    s.t.   0 <= a_i <= C_i,  sum_i a_i y_i = 0

with labels mapped to y in {-1, +1}. Each iteration picks the maximal
violating pair (i from the "can move up" set, j from the "can move down"
set), solves the two-variable subproblem in closed form and updates the
cached decision values. The gap between the two extreme violations bounds
the KKT residual of every training point, so any stopping gap ``<= tol``
guarantees the three-case KKT audit passes at ``tol``. The default stops at
``tol / 10``; the dual objective error shrinks roughly with the square of
the gap.
"""

from __future__ import annotations

import logging
from collections import OrderedDict
from dataclasses import dataclass, field

import numpy as np

from ._checks import check_training_set, sample_weights
from .kernels import KernelSpec, kernel_matrix

log = logging.getLogger(__name__)

# alphas within this fraction of a bound are snapped onto it
_SNAP = 1e-12
# curvature floor for non positive-definite pairs (duplicate points)
_TAU = 1e-12


@dataclass
class SvmModel:
    support_vectors: np.ndarray
    dual_coef: np.ndarray  # alpha_i * y_i, y in {-1, +1}
    bias: float
    kernel: KernelSpec
    C: float
    support_indices: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    meta: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.support_vectors.shape[1]

    @property
    def converged(self) -> bool:
        return bool(self.meta.get("converged", True))

    def decision_function(self, X, chunk: int = 4096) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.dim:
            raise ValueError(f"expected {self.dim} features, got {X.shape[1]}")
        if len(self.dual_coef) == 0:
            return np.full(X.shape[0], self.bias)
        out = np.empty(X.shape[0])
        for s in range(0, X.shape[0], chunk):
            K = kernel_matrix(self.kernel, X[s : s + chunk], self.support_vectors)
            out[s : s + chunk] = K @ self.dual_coef + self.bias
        return out

    def predict(self, X) -> np.ndarray:
        return (self.decision_function(X) >= 0.0).astype(np.int64)


def predict_svm(m: SvmModel, x) -> int:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size != m.dim:
        raise ValueError(f"expected a {m.dim}-vector, got shape {x.shape}")
    return int(m.decision_function(x[None, :])[0] >= 0.0)


class _ColumnCache:
    """LRU cache of kernel columns K[:, i]."""

    def __init__(self, k: KernelSpec, X: np.ndarray, max_bytes: int):
        self.k = k
        self.X = X
        self.sq = (X * X).sum(1)
        self.capacity = max(2, max_bytes // max(1, 8 * X.shape[0]))
        self.cols: OrderedDict[int, np.ndarray] = OrderedDict()

    def __getitem__(self, i: int) -> np.ndarray:
        col = self.cols.get(i)
        if col is not None:
            self.cols.move_to_end(i)
            return col
        g = self.X @ self.X[i]
        if self.k.kind == "linear":
            col = g
        else:
            sq = self.sq + self.sq[i] - 2.0 * g
            np.maximum(sq, 0.0, out=sq)
            col = np.exp(-self.k.gamma * sq)
        self.cols[i] = col
        if len(self.cols) > self.capacity:
            self.cols.popitem(last=False)
        return col

    def diag(self) -> np.ndarray:
        if self.k.kind == "linear":
            return self.sq.copy()
        return np.ones(self.X.shape[0])


def _violation_sets(alpha, ys, Cv):
    at_upper = alpha >= Cv
    at_lower = alpha <= 0.0
    up = np.where(ys > 0, ~at_upper, ~at_lower)
    low = np.where(ys > 0, ~at_lower, ~at_upper)
    return up, low


def _recompute_v(Xp, ys, alpha, kernel: KernelSpec, rows: np.ndarray, chunk: int = 2048) -> np.ndarray:
    """y_t - sum_s alpha_s y_s K(x_s, x_t) from scratch for the given rows."""
    sv = np.flatnonzero(alpha > 0.0)
    out = ys[rows].copy()
    if sv.size == 0:
        return out
    coef = alpha[sv] * ys[sv]
    if kernel.kind == "linear":
        return out - Xp[rows] @ (coef @ Xp[sv])
    for a in range(0, rows.size, chunk):
        r = rows[a : a + chunk]
        out[a : a + chunk] -= kernel_matrix(kernel, Xp[r], Xp[sv]) @ coef
    return out


class _Active:
    """Solver state restricted to the active (unshrunk) rows."""

    def __init__(self, idx, Xp, ys, Cv, alpha, v, kernel, cache_bytes):
        self.idx = idx
        self.ys, self.Cv = ys[idx], Cv[idx]
        self.alpha, self.v = alpha[idx], v[idx]
        self.cache = _ColumnCache(kernel, np.ascontiguousarray(Xp[idx]), cache_bytes)
        self.kdiag = self.cache.diag()
        up, low = _violation_sets(self.alpha, self.ys, self.Cv)
        # membership in I_up / I_low as additive masks: 0 inside, -inf / +inf outside
        self.pen_up = np.where(up, 0.0, -np.inf)
        self.pen_low = np.where(low, 0.0, np.inf)
        self.buf = np.empty(idx.size)

    def store(self, alpha, v) -> None:
        alpha[self.idx] = self.alpha
        v[self.idx] = self.v

    def refresh(self, k: int) -> None:
        u, lw = _violation_sets(self.alpha[k], self.ys[k], self.Cv[k])
        self.pen_up[k] = 0.0 if u else -np.inf
        self.pen_low[k] = 0.0 if lw else np.inf

    def select(self) -> tuple[int, int, float, float]:
        np.add(self.v, self.pen_up, out=self.buf)
        i = int(np.argmax(self.buf))
        m = float(self.buf[i])
        np.add(self.v, self.pen_low, out=self.buf)
        j = int(np.argmin(self.buf))
        return i, j, m, float(self.buf[j])

    def shrinkable(self, m: float, M: float) -> np.ndarray:
        up_only = (self.pen_up == 0.0) & (self.pen_low > 0.0)
        low_only = (self.pen_low == 0.0) & (self.pen_up < 0.0)
        return (up_only & (self.v < M)) | (low_only & (self.v > m))


def train_svm_smo(
    X,
    y,
    C: float = 1.0,
    kernel: KernelSpec | None = None,
    tol: float = 1e-3,
    max_passes: int = 10,
    seed: int = 0,
    class_weight: str | None = None,
    max_iter: int | None = None,
    eps: float | None = None,
    cache_mb: int = 256,
    shrinking: bool = True,
) -> SvmModel:
    """Train a binary SVM; labels are 0/1, class 1 maps to +1.

    ``seed`` fixes a permutation of the training set before solving, which
    determines how ties between equally violating points are broken.
    The iteration budget defaults to ``max_passes * 10 * max(n, 100)``;
    running out of it returns the current iterate with
    ``meta["converged"] = False``.

    With ``shrinking`` on, bound variables that cannot currently violate
    optimality leave the working set every ``min(n, 1000)`` iterations;
    convergence is always confirmed on the full set.
    """
    X, y = check_training_set(X, y)
    if not C > 0:
        raise ValueError("C must be positive")
    if not tol > 0:
        raise ValueError("tol must be positive")
    kernel = kernel or KernelSpec("linear")
    eps = 0.1 * tol if eps is None else min(eps, tol)
    n = X.shape[0]
    sw = sample_weights(y, class_weight)

    order = np.random.default_rng(seed).permutation(n)
    Xp = np.ascontiguousarray(X[order])
    ys = np.where(y[order] == 1, 1.0, -1.0)
    Cv = np.full(n, float(C)) if sw is None else C * sw[order]

    cache_bytes = cache_mb << 20
    everyone = np.arange(n)
    alpha = np.zeros(n)
    v = ys.copy()  # y_t - sum_s alpha_s y_s K(x_s, x_t), bias excluded
    act = _Active(everyone, Xp, ys, Cv, alpha, v, kernel, cache_bytes)
    budget = max_iter if max_iter is not None else max_passes * 10 * max(n, 100)
    interval = min(n, 1000)
    countdown = interval
    unshrunk = False

    def restore_all() -> _Active:
        act.store(alpha, v)
        rest = np.setdiff1d(everyone, act.idx, assume_unique=True)
        v[rest] = _recompute_v(Xp, ys, alpha, kernel, rest)
        return _Active(everyone, Xp, ys, Cv, alpha, v, kernel, cache_bytes)

    converged = False
    it = 0
    gap = np.inf
    while True:
        i, j, m, M = act.select()
        gap = m - M if np.isfinite(m) and np.isfinite(M) else 0.0
        if gap <= eps:
            if act.idx.size == n:
                converged = True
                break
            act = restore_all()
            countdown = interval
            continue
        if shrinking and not unshrunk and gap <= 10.0 * eps and act.idx.size < n:
            unshrunk = True
            act = restore_all()
            continue
        if shrinking and countdown <= 0:
            countdown = interval
            drop = act.shrinkable(m, M)
            if drop.any():
                act.store(alpha, v)
                act = _Active(act.idx[~drop], Xp, ys, Cv, alpha, v, kernel, cache_bytes)
                continue
        if it >= budget:
            break
        it += 1
        countdown -= 1

        a = act
        Ki, Kj = a.cache[i], a.cache[j]
        eta = max(a.kdiag[i] + a.kdiag[j] - 2.0 * Ki[j], _TAU)
        yi, yj = a.ys[i], a.ys[j]
        ai, aj = a.alpha[i], a.alpha[j]
        if yi != yj:
            delta = aj - ai
            lo, hi = max(0.0, delta), min(a.Cv[j], a.Cv[i] + delta)
        else:
            total = ai + aj
            lo, hi = max(0.0, total - a.Cv[i]), min(a.Cv[j], total)
        # E_i - E_j = -(v_i - v_j)
        aj_new = min(max(aj - yj * gap / eta, lo), hi)
        ai_new = ai + yi * yj * (aj - aj_new)
        ai_new = _snap(ai_new, a.Cv[i])
        aj_new = _snap(aj_new, a.Cv[j])
        dai, daj = ai_new - ai, aj_new - aj
        if dai == 0.0 and daj == 0.0:
            # numerically stuck pair; nothing further can be gained
            log.warning("SMO stalled at gap %.3g after %d iterations", gap, it)
            break
        a.alpha[i], a.alpha[j] = ai_new, aj_new
        np.multiply(Ki, dai * yi, out=a.buf)
        a.v -= a.buf
        np.multiply(Kj, daj * yj, out=a.buf)
        a.v -= a.buf
        a.refresh(i)
        a.refresh(j)

    if act.idx.size < n:
        act = restore_all()
    act.store(alpha, v)

    if not converged:
        log.warning("SMO did not reach gap %g within %d iterations (gap %.3g)", eps, budget, gap)

    free = (alpha > 0.0) & (alpha < Cv)
    if free.any():
        b = float(v[free].mean())
    else:
        up, low = _violation_sets(alpha, ys, Cv)
        hi_v = v[up].max() if up.any() else v.min()
        lo_v = v[low].min() if low.any() else v.max()
        b = float(0.5 * (hi_v + lo_v))

    sv = alpha > 0.0
    inv = order[sv]
    keep = np.argsort(inv, kind="stable")
    meta = {
        "tol": tol,
        "eps": eps,
        "max_passes": max_passes,
        "seed": seed,
        "class_weight": class_weight or "none",
        "iterations": it,
        "final_gap": float(max(gap, 0.0)),
        "converged": converged,
    }
    return SvmModel(
        support_vectors=Xp[sv][keep],
        dual_coef=(alpha[sv] * ys[sv])[keep],
        bias=b,
        kernel=kernel,
        C=float(C),
        support_indices=inv[keep].astype(np.int64),
        meta=meta,
    )


def _snap(a: float, c: float) -> float:
    if a <= _SNAP * c:
        return 0.0
    if a >= c * (1.0 - _SNAP):
        return float(c)
    return float(a)


def full_alphas(m: SvmModel, n: int) -> np.ndarray:
    """Dual variables over the whole training set (zeros for non-support vectors)."""
    alpha = np.zeros(n)
    alpha[m.support_indices] = np.abs(m.dual_coef)
    return alpha


def dual_objective(alpha: np.ndarray, X, y, kernel: KernelSpec) -> float:
    ys = np.where(np.asarray(y) == 1, 1.0, -1.0)
    K = kernel_matrix(kernel, X, X)
    ay = alpha * ys
    return float(alpha.sum() - 0.5 * ay @ K @ ay)


def kkt_audit(m: SvmModel, X, y, tol: float, class_weight: str | None = None) -> dict:
    """Check the three complementary-slackness cases on the training set.

    Returns counts of violations per case and the worst residual; ``ok`` is
    True when no point violates its case by more than ``tol``.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=np.int64)
    ys = np.where(y == 1, 1.0, -1.0)
    sw = sample_weights(y, class_weight)
    Cv = np.full(len(y), m.C) if sw is None else m.C * sw
    alpha = full_alphas(m, len(y))
    margin = ys * m.decision_function(X)
    at_zero = alpha <= 0.0
    at_c = alpha >= Cv
    free = ~at_zero & ~at_c
    r_zero = np.where(at_zero, np.maximum(0.0, (1.0 - tol) - margin), 0.0)
    r_c = np.where(at_c, np.maximum(0.0, margin - (1.0 + tol)), 0.0)
    r_free = np.where(free, np.maximum(0.0, np.abs(margin - 1.0) - tol), 0.0)
    eq = float(abs(np.sum(alpha * ys)))
    bounds_ok = bool(np.all(alpha >= 0.0) and np.all(alpha <= Cv))
    return {
        "ok": bool(r_zero.max() == 0 and r_c.max() == 0 and r_free.max() == 0 and bounds_ok),
        "violations_zero": int((r_zero > 0).sum()),
        "violations_bound": int((r_c > 0).sum()),
        "violations_free": int((r_free > 0).sum()),
        "max_margin_residual": float(max(r_zero.max(), r_c.max(), r_free.max())),
        "equality_residual": eq,
        "bounds_ok": bounds_ok,
    }
