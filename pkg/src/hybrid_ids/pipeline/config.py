"""Flat ``key=value`` experiment configuration."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, fields
from importlib import resources
from pathlib import Path

from ..data import FEATURES


class ConfigError(Exception):
    pass


def sample_path(name: str) -> str:
    return str(resources.files("hybrid_ids") / "sample_data" / name)


# key -> (default, help). Order is the order written to config snapshots.
KEYS: dict[str, tuple[str, str]] = {
    "train_csv": ("", "UNSW-NB15 training CSV (default: bundled synthetic sample)"),
    "test_csv": ("", "UNSW-NB15 testing CSV (default: bundled synthetic sample)"),
    "features": (",".join(FEATURES), "comma-separated subset of the eight flow features, in order"),
    "seed": ("0", "master seed; every stage seed is derived from it"),
    "subset_size": ("200", "rows drawn for the small-sample and quantum experiments"),
    "split_fraction": ("0.8", "training share of the subset"),
    "stratified": ("false", "class-proportional subset draw"),
    "scaler_fit": ("joint", "fit min-max bounds on 'joint' train+test or 'train' only"),
    "depth": ("2", "strongly entangling layers"),
    "angle_scale": ("1.0", "rotation angle = angle_scale * feature"),
    "weight_seed": ("", "circuit weight seed (default: derived from seed)"),
    "quantum_kernel": ("rbf", "kernel of the SVM trained on quantum embeddings"),
    "C": ("1.0", "SVM box constraint"),
    "tol": ("0.001", "SVM KKT tolerance"),
    "max_passes": ("10", "SVM iteration budget multiplier"),
    "gamma": ("scale", "RBF gamma: 'scale' or a positive number"),
    "class_weight": ("none", "'none' or 'balanced' cost-sensitive weighting"),
    "logreg_lr": ("0.1", "logistic regression step size"),
    "logreg_epochs": ("1000", "logistic regression full-batch epochs"),
    "rbf_subsample": ("20000", "training rows for the full-data RBF SVM"),
    "models": ("logreg,linear_svm,rbf_svm", "classical models to train"),
    "workers": ("1", "threads for batch embedding"),
    "report_digits": ("2", "decimals in text reports: 2 or 4"),
}

MODEL_NAMES = ("logreg", "linear_svm", "rbf_svm")


def _bool(v: str) -> bool:
    low = v.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {v!r}")


@dataclass
class ExperimentConfig:
    train_csv: str
    test_csv: str
    features: tuple[str, ...]
    seed: int
    subset_size: int
    split_fraction: float
    stratified: bool
    scaler_fit: str
    depth: int
    angle_scale: float
    weight_seed: int | None
    quantum_kernel: str
    C: float
    tol: float
    max_passes: int
    gamma: str
    class_weight: str
    logreg_lr: float
    logreg_epochs: int
    rbf_subsample: int
    models: tuple[str, ...]
    workers: int
    report_digits: int
    out_dir: Path = field(default=Path("runs/default"))

    @property
    def n_qubits(self) -> int:
        return len(self.features)

    @property
    def feature_index(self) -> list[int]:
        return [FEATURES.index(f) for f in self.features]

    def gamma_value(self) -> float | None:
        return None if self.gamma == "scale" else float(self.gamma)

    def snapshot(self) -> dict[str, str]:
        out = {}
        for f in fields(self):
            if f.name == "out_dir":
                continue
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = ",".join(v)
            elif isinstance(v, bool):
                v = "true" if v else "false"
            elif v is None:
                v = ""
            out[f.name] = str(v)
        return out

    def dump(self) -> str:
        return "".join(f"{k}={v}\n" for k, v in self.snapshot().items())


def parse_lines(text: str) -> dict[str, str]:
    out = {}
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {n}: expected key=value, got {raw!r}")
        k, v = line.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def load_config(path: str | Path | None = None, overrides: dict[str, str] | None = None, out_dir=None) -> ExperimentConfig:
    raw = {k: d for k, (d, _) in KEYS.items()}
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        raw.update(parse_lines(text))
    raw.update(overrides or {})
    unknown = sorted(set(raw) - set(KEYS))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    try:
        cfg = ExperimentConfig(
            train_csv=raw["train_csv"] or sample_path("synthetic_training_set.csv"),
            test_csv=raw["test_csv"] or sample_path("synthetic_testing_set.csv"),
            features=tuple(f.strip() for f in raw["features"].split(",") if f.strip()),
            seed=int(raw["seed"]),
            subset_size=int(raw["subset_size"]),
            split_fraction=float(raw["split_fraction"]),
            stratified=_bool(raw["stratified"]),
            scaler_fit=raw["scaler_fit"],
            depth=int(raw["depth"]),
            angle_scale=float(raw["angle_scale"]),
            weight_seed=int(raw["weight_seed"]) if raw["weight_seed"] else None,
            quantum_kernel=raw["quantum_kernel"],
            C=float(raw["C"]),
            tol=float(raw["tol"]),
            max_passes=int(raw["max_passes"]),
            gamma=raw["gamma"],
            class_weight=raw["class_weight"],
            logreg_lr=float(raw["logreg_lr"]),
            logreg_epochs=int(raw["logreg_epochs"]),
            rbf_subsample=int(raw["rbf_subsample"]),
            models=tuple(m.strip() for m in raw["models"].split(",") if m.strip()),
            workers=int(raw["workers"]),
            report_digits=int(raw["report_digits"]),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if out_dir is not None:
        cfg.out_dir = Path(out_dir)
    validate(cfg)
    return cfg


def validate(cfg: ExperimentConfig) -> None:
    bad = [f for f in cfg.features if f not in FEATURES]
    if bad or not cfg.features:
        raise ConfigError(f"features must be drawn from {', '.join(FEATURES)}; got {', '.join(bad) or 'none'}")
    if len(set(cfg.features)) != len(cfg.features):
        raise ConfigError("features must not repeat")
    if cfg.n_qubits > 12:
        raise ConfigError("at most 12 features (qubits) are supported")
    if cfg.subset_size < 2:
        raise ConfigError("subset_size must be >= 2")
    if not 0.0 < cfg.split_fraction < 1.0:
        raise ConfigError("split_fraction must lie strictly between 0 and 1")
    if cfg.scaler_fit not in ("joint", "train"):
        raise ConfigError("scaler_fit must be 'joint' or 'train'")
    if cfg.depth < 1:
        raise ConfigError("depth must be >= 1")
    if cfg.quantum_kernel not in ("linear", "rbf"):
        raise ConfigError("quantum_kernel must be 'linear' or 'rbf'")
    if not (cfg.C > 0 and cfg.tol > 0 and cfg.max_passes >= 1):
        raise ConfigError("C and tol must be positive, max_passes >= 1")
    if cfg.gamma != "scale":
        try:
            if not float(cfg.gamma) > 0:
                raise ValueError
        except ValueError:
            raise ConfigError("gamma must be 'scale' or a positive number") from None
    if cfg.class_weight not in ("none", "balanced"):
        raise ConfigError("class_weight must be 'none' or 'balanced'")
    if not (cfg.logreg_lr > 0 and cfg.logreg_epochs >= 1):
        raise ConfigError("logreg_lr must be positive and logreg_epochs >= 1")
    if cfg.rbf_subsample < 2:
        raise ConfigError("rbf_subsample must be >= 2")
    bad = [m for m in cfg.models if m not in MODEL_NAMES]
    if bad or not cfg.models:
        raise ConfigError(f"models must be drawn from {', '.join(MODEL_NAMES)}")
    if cfg.workers < 1:
        raise ConfigError("workers must be >= 1")
    if cfg.report_digits not in (2, 4):
        raise ConfigError("report_digits must be 2 or 4")


def derive_seed(master: int, stage: str) -> int:
    """Stage seed from the master seed; stable across platforms and Python versions."""
    digest = hashlib.sha256(f"{master}:{stage}".encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1
