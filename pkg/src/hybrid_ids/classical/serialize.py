"""Plain-text model files.

Header lines are ``key=value``; a line containing only ``--`` separates
them from the parameter rows. Floats are written with ``repr`` so a reload
reproduces every parameter, and therefore every prediction, bit for bit.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .kernels import KernelSpec
from .logreg import LogRegModel
from .svm import SvmModel


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _parse(v: str):
    if v in ("true", "false"):
        return v == "true"
    for cast in (int, float):
        try:
            return cast(v)
        except ValueError:
            pass
    return v


def save_model(model, path) -> None:
    if isinstance(model, LogRegModel):
        header = {"kind": "logreg", "dim": model.weights.size, "bias": float(model.bias)}
        header.update({f"meta.{k}": v for k, v in model.meta.items()})
        rows = [",".join(repr(float(w)) for w in model.weights)]
    elif isinstance(model, SvmModel):
        header = {
            "kind": "svm",
            "kernel": model.kernel.kind,
            "gamma": "none" if model.kernel.gamma is None else float(model.kernel.gamma),
            "C": float(model.C),
            "bias": float(model.bias),
            "dim": model.dim,
            "n_support": len(model.dual_coef),
        }
        header.update({f"meta.{k}": v for k, v in model.meta.items()})
        rows = [
            ",".join([str(int(idx)), repr(float(c))] + [repr(float(x)) for x in sv])
            for idx, c, sv in zip(model.support_indices, model.dual_coef, model.support_vectors)
        ]
    else:
        raise TypeError(f"cannot serialise {type(model).__name__}")
    lines = [f"{k}={_fmt(v)}" for k, v in header.items()] + ["--"] + rows
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def load_model(path):
    text = Path(path).read_text(encoding="utf-8").splitlines()
    sep = text.index("--")
    header = {}
    for line in text[:sep]:
        k, _, v = line.partition("=")
        header[k] = v
    rows = [r for r in text[sep + 1 :] if r.strip()]
    meta = {k[5:]: _parse(v) for k, v in header.items() if k.startswith("meta.")}
    dim = int(header["dim"])
    if header["kind"] == "logreg":
        weights = np.array([float(v) for v in rows[0].split(",")]) if rows else np.zeros(0)
        return LogRegModel(weights, float(header["bias"]), meta)
    if header["kind"] == "svm":
        gamma = None if header["gamma"] == "none" else float(header["gamma"])
        kernel = KernelSpec(header["kernel"], gamma)
        idx, coef, svs = [], [], []
        for r in rows:
            parts = r.split(",")
            idx.append(int(parts[0]))
            coef.append(float(parts[1]))
            svs.append([float(v) for v in parts[2:]])
        return SvmModel(
            support_vectors=np.array(svs, dtype=float).reshape(len(rows), dim),
            dual_coef=np.array(coef, dtype=float),
            bias=float(header["bias"]),
            kernel=kernel,
            C=float(header["C"]),
            support_indices=np.array(idx, dtype=np.int64),
            meta=meta,
        )
    raise ValueError(f"unknown model kind {header['kind']!r}")
