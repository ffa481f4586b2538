"""The experiment stages: preprocess, baseline, small-sample, quantum, report.

Every stage after ``preprocess`` reads only the persisted preprocessing
outputs under ``<out>/preprocess``; raw CSVs are never touched again.
"""

from __future__ import annotations

import logging
import time
from pathlib import Path

import numpy as np

from .. import data as D
from .. import metrics as M
from ..classical import (
    KernelSpec,
    SingleClassError,
    gamma_scale,
    save_model,
    train_logreg,
    train_svm_smo,
)
from ..quantum import embed_batch, init_weights, write_embeddings, write_weights
from .config import ExperimentConfig, derive_seed
from .manifest import Manifest

log = logging.getLogger(__name__)

PRE = "preprocess"
BASELINE = "baseline"
SMALL = "small_sample"
QUANTUM = "quantum"
REPORT = "report"

MODEL_LABELS = {"logreg": "Logistic Regression", "linear_svm": "Linear SVM", "rbf_svm": "RBF SVM"}


class StageError(Exception):
    """A stage failed; ``kind`` is 'data' or 'model' and selects the exit code."""

    def __init__(self, stage: str, kind: str, message: str):
        self.stage = stage
        self.kind = kind
        super().__init__(f"[{stage}] {message}")


def _write(path: Path, text: str, manifest: Manifest) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    manifest.record_artifact(path)


# -- preprocess --------------------------------------------------------------------


def cmd_preprocess(cfg: ExperimentConfig) -> dict:
    t0 = time.perf_counter()
    out = cfg.out_dir / PRE
    out.mkdir(parents=True, exist_ok=True)
    man = Manifest(cfg.out_dir)
    man.record_config(cfg.snapshot())
    try:
        train_rec = D.load_csv(cfg.train_csv)
        test_rec = D.load_csv(cfg.test_csv)
        enc = D.fit_encoders(train_rec + test_rec)
        raw_train = D.raw_matrix(train_rec, enc)
        raw_test = D.raw_matrix(test_rec, enc)
        scaler = D.fit_scaler(np.vstack([raw_train, raw_test]) if cfg.scaler_fit == "joint" else raw_train)
        train = D.Dataset(scaler.transform(raw_train), [r.label for r in train_rec], "train")
        test = D.Dataset(scaler.transform(raw_test), [r.label for r in test_rec], "test")
    except D.DataError as exc:
        raise StageError(PRE, "data", str(exc)) from exc
    for src in (cfg.train_csv, cfg.test_csv):
        man.record_input(src)
    D.write_dataset(train, out / "train.csv")
    D.write_dataset(test, out / "test.csv")
    man.record_artifact(out / "train.csv")
    man.record_artifact(out / "test.csv")
    info = {
        "train_rows": len(train),
        "test_rows": len(test),
        "train_attack": int(train.y.sum()),
        "test_attack": int(test.y.sum()),
        "scaler_fit": cfg.scaler_fit,
    }
    meta = dict(info)
    meta.update(
        seed=cfg.seed,
        train_source=Path(cfg.train_csv).name,
        test_source=Path(cfg.test_csv).name,
        train_sha256=D.file_digest(cfg.train_csv),
        test_sha256=D.file_digest(cfg.test_csv),
        features=",".join(D.FEATURES),
    )
    D.write_metadata(out / "preprocess.meta", enc, scaler, meta)
    man.record_artifact(out / "preprocess.meta")
    man.record_stage(PRE, info, time.perf_counter() - t0)
    man.save()
    log.info("preprocess: %d train rows, %d test rows", len(train), len(test))
    return info


def load_preprocessed(cfg: ExperimentConfig, stage: str) -> tuple[D.Dataset, D.Dataset]:
    base = cfg.out_dir / PRE
    paths = [base / "train.csv", base / "test.csv"]
    missing = [str(p) for p in paths if not p.exists()]
    if missing:
        raise StageError(stage, "data", "preprocessing outputs missing; run 'preprocess' first: " + ", ".join(missing))
    train = D.read_dataset(paths[0], "train")
    test = D.read_dataset(paths[1], "test")
    cols = cfg.feature_index
    return (
        D.Dataset(train.X[:, cols], train.y, "train", train.provenance),
        D.Dataset(test.X[:, cols], test.y, "test", test.provenance),
    )


# -- classical models ------------------------------------------------------------


def _fit_classical(name: str, cfg: ExperimentConfig, X: np.ndarray, y: np.ndarray):
    cw = None if cfg.class_weight == "none" else cfg.class_weight
    if name == "logreg":
        return train_logreg(X, y, cfg.logreg_lr, cfg.logreg_epochs, derive_seed(cfg.seed, "logreg"), cw)
    if name == "linear_svm":
        kernel = KernelSpec("linear")
    else:
        gamma = cfg.gamma_value() or gamma_scale(X)
        kernel = KernelSpec("rbf", gamma)
    return train_svm_smo(
        X,
        y,
        C=cfg.C,
        kernel=kernel,
        tol=cfg.tol,
        max_passes=cfg.max_passes,
        seed=derive_seed(cfg.seed, f"smo.{name}"),
        class_weight=cw,
    )


def _evaluate_and_persist(
    model, name: str, X_test, y_test, out: Path, man: Manifest, title: str, digits: int
) -> M.MetricsReport:
    report = M.evaluate(y_test, model.predict(X_test))
    save_model(model, out / f"{name}.model")
    man.record_artifact(out / f"{name}.model")
    _write(out / f"{name}.report.kv", M.render_kv(report), man)
    _write(out / f"{name}.report.txt", M.render_text(report, title=title, digits=digits), man)
    _write(out / f"{name}.confusion.csv", M.confusion_csv(report.confusion), man)
    return report


def _run_models(stage: str, cfg: ExperimentConfig, train: D.Dataset, test: D.Dataset, out: Path, man: Manifest):
    info: dict = {"models": {}}
    reports = {}
    for name in cfg.models:
        X, y = train.X, train.y
        if name == "rbf_svm" and stage == BASELINE and len(train) > cfg.rbf_subsample:
            sub = D.subsample(train, cfg.rbf_subsample, derive_seed(cfg.seed, "rbf_subsample"))
            X, y = sub.X, sub.y
        entry = {"train_rows": int(len(y))}
        try:
            model = _fit_classical(name, cfg, X, y)
        except (SingleClassError, ValueError, FloatingPointError) as exc:
            log.error("%s: %s failed: %s", stage, name, exc)
            entry.update(status="failed", error=str(exc))
            info["models"][name] = entry
            continue
        converged = bool(getattr(model, "meta", {}).get("converged", True))
        entry.update(status="ok", converged=converged)
        if not converged:
            entry["warning"] = "solver iteration budget exhausted"
        title = f"{MODEL_LABELS[name]} ({stage})"
        reports[name] = _evaluate_and_persist(model, name, test.X, test.y, out, man, title, cfg.report_digits)
        entry["accuracy"] = reports[name].accuracy
        info["models"][name] = entry
    return reports, info


def _summary_table(reports: dict[str, M.MetricsReport], info: dict) -> str:
    lines = [f"{'Model':<22}{'Accuracy (%)':>14}{'Training rows':>15}"]
    for name, r in reports.items():
        rows = info["models"][name]["train_rows"]
        lines.append(f"{MODEL_LABELS.get(name, name):<22}{100 * r.accuracy:>14.1f}{rows:>15}")
    return "\n".join(lines) + "\n"


def cmd_baseline(cfg: ExperimentConfig) -> dict:
    t0 = time.perf_counter()
    train, test = load_preprocessed(cfg, BASELINE)
    out = cfg.out_dir / BASELINE
    out.mkdir(parents=True, exist_ok=True)
    man = Manifest(cfg.out_dir)
    man.record_config(cfg.snapshot())
    reports, info = _run_models(BASELINE, cfg, train, test, out, man)
    _write(out / "summary.txt", _summary_table(reports, info), man)
    man.record_stage(BASELINE, info, time.perf_counter() - t0)
    man.save()
    return info


# -- shared 200-sample protocol ------------------------------------------------------


def small_sample_split(cfg: ExperimentConfig, stage: str) -> tuple[D.Dataset, D.Dataset]:
    """The seeded subset and its train/test partition, identical for every stage."""
    train, test = load_preprocessed(cfg, stage)
    corpus = D.concat([train, test], "corpus")
    try:
        subset = D.subsample(corpus, cfg.subset_size, derive_seed(cfg.seed, "subset"), cfg.stratified)
        tr, te = D.split(subset, cfg.split_fraction, derive_seed(cfg.seed, "split"))
    except D.DataError as exc:
        raise StageError(stage, "data", str(exc)) from exc
    if tr.y.min() == tr.y.max():
        raise StageError(
            stage,
            "data",
            f"the {len(tr)}-row training split holds a single class; choose another seed or set stratified=true",
        )
    return tr, te


def _persist_split(tr: D.Dataset, te: D.Dataset, out: Path, man: Manifest) -> None:
    D.write_dataset(tr, out / "subset_train.csv")
    D.write_dataset(te, out / "subset_test.csv")
    man.record_artifact(out / "subset_train.csv")
    man.record_artifact(out / "subset_test.csv")


def cmd_small_sample(cfg: ExperimentConfig) -> dict:
    t0 = time.perf_counter()
    tr, te = small_sample_split(cfg, SMALL)
    out = cfg.out_dir / SMALL
    out.mkdir(parents=True, exist_ok=True)
    man = Manifest(cfg.out_dir)
    man.record_config(cfg.snapshot())
    _persist_split(tr, te, out, man)
    reports, info = _run_models(SMALL, cfg, tr, te, out, man)
    info.update(train_rows=len(tr), test_rows=len(te), train_attack=int(tr.y.sum()), test_attack=int(te.y.sum()))
    _write(out / "summary.txt", _summary_table(reports, info), man)
    man.record_stage(SMALL, info, time.perf_counter() - t0)
    man.save()
    return info


def cmd_quantum(cfg: ExperimentConfig) -> dict:
    t0 = time.perf_counter()
    tr, te = small_sample_split(cfg, QUANTUM)
    out = cfg.out_dir / QUANTUM
    out.mkdir(parents=True, exist_ok=True)
    man = Manifest(cfg.out_dir)
    man.record_config(cfg.snapshot())
    _persist_split(tr, te, out, man)

    wseed = cfg.weight_seed if cfg.weight_seed is not None else derive_seed(cfg.seed, "weights")
    try:
        w = init_weights(cfg.n_qubits, cfg.depth, wseed)
        E_train = embed_batch(tr.X, w, cfg.angle_scale, cfg.workers)
        E_test = embed_batch(te.X, w, cfg.angle_scale, cfg.workers)
    except ValueError as exc:
        raise StageError(QUANTUM, "model", f"embedding failed: {exc}") from exc
    write_weights(w, out / "weights.txt")
    man.record_artifact(out / "weights.txt")
    for path, E, y in ((out / "embeddings_train.csv", E_train, tr.y), (out / "embeddings_test.csv", E_test, te.y)):
        write_embeddings(E, y, path, cfg.depth, wseed, cfg.angle_scale)
        man.record_artifact(path)

    cw = None if cfg.class_weight == "none" else cfg.class_weight
    try:
        if cfg.quantum_kernel == "rbf":
            kernel = KernelSpec("rbf", cfg.gamma_value() or gamma_scale(E_train))
        else:
            kernel = KernelSpec("linear")
        model = train_svm_smo(
            E_train,
            tr.y,
            C=cfg.C,
            kernel=kernel,
            tol=cfg.tol,
            max_passes=cfg.max_passes,
            seed=derive_seed(cfg.seed, "smo.quantum"),
            class_weight=cw,
        )
    except (SingleClassError, ValueError) as exc:
        raise StageError(QUANTUM, "model", f"SVM training failed: {exc}") from exc
    report = _evaluate_and_persist(model, "svm", E_test, te.y, out, man, "Quantum Embedding + SVM", cfg.report_digits)
    info = {
        "n_qubits": cfg.n_qubits,
        "depth": cfg.depth,
        "weight_seed": wseed,
        "angle_scale": cfg.angle_scale,
        "kernel": kernel.describe(),
        "train_rows": len(tr),
        "test_rows": len(te),
        "embedding_min": float(min(E_train.min(), E_test.min())),
        "embedding_max": float(max(E_train.max(), E_test.max())),
        "converged": model.converged,
        "accuracy": report.accuracy,
    }
    man.record_stage(QUANTUM, info, time.perf_counter() - t0)
    man.save()
    return info


# -- combined report -----------------------------------------------------------------


REPORT_ROWS = [
    (BASELINE, "logreg", "Full data", "Logistic Regression"),
    (BASELINE, "linear_svm", "Full data", "Linear SVM"),
    (BASELINE, "rbf_svm", "Full data", "RBF SVM"),
    (SMALL, "logreg", "200 samples", "Logistic Regression"),
    (SMALL, "linear_svm", "200 samples", "Linear SVM"),
    (SMALL, "rbf_svm", "200 samples", "RBF SVM"),
    (QUANTUM, "svm", "200 samples", "Quantum Embedding + SVM"),
]

REPORT_METRICS = ("accuracy", "attack.precision", "attack.recall", "attack.f1", "macro.f1")


def cmd_report(cfg: ExperimentConfig) -> dict:
    t0 = time.perf_counter()
    found = []
    absent = []
    for stage, name, regime, label in REPORT_ROWS:
        p = cfg.out_dir / stage / f"{name}.report.kv"
        if p.exists():
            found.append((stage, name, regime, label, M.parse_kv(p.read_text(encoding="utf-8"))))
        else:
            absent.append(str(p))
    if not found:
        raise StageError(REPORT, "data", "no experiment outputs found; expected any of: " + ", ".join(absent))

    head = f"{'Regime':<13}{'Model':<26}" + "".join(f"{h:>11}" for h in ("Accuracy", "Precision", "Recall", "F1", "Macro F1"))
    lines = [head, "-" * len(head)]
    kv_lines = []
    for stage, name, regime, label, kv in found:
        vals = [float(kv[m]) for m in REPORT_METRICS]
        lines.append(f"{regime:<13}{label:<26}" + "".join(f"{v:>11.3f}" for v in vals))
        for m in REPORT_METRICS:
            kv_lines.append(f"{stage}.{name}.{m}={kv[m]}")
    present = {(s, n) for s, n, *_ in found}
    missing_rows = [f"{regime} / {label}" for s, n, regime, label in REPORT_ROWS if (s, n) not in present]
    lines.append("")
    lines.append("Precision, recall and F1 are for the attack class; Macro F1 averages both classes.")
    if missing_rows:
        lines.append("Not run: " + "; ".join(missing_rows))
    out = cfg.out_dir / REPORT
    man = Manifest(cfg.out_dir)
    _write(out / "comparison.txt", "\n".join(lines) + "\n", man)
    _write(out / "comparison.kv", "\n".join(kv_lines) + "\n", man)
    info = {"rows": len(found), "missing": missing_rows}
    man.record_stage(REPORT, info, time.perf_counter() - t0)
    man.save()
    return info


def parse_comparison(text: str) -> dict[tuple[str, str], dict[str, float]]:
    rows: dict[tuple[str, str], dict[str, float]] = {}
    for k, v in M.parse_kv(text).items():
        stage, name, metric = k.split(".", 2)
        rows.setdefault((stage, name), {})[metric] = float(v)
    return rows
