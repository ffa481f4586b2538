"""UNSW-NB15 flow ingestion, label encoding, min-max scaling and seeded sampling."""

from __future__ import annotations

import csv
import hashlib
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

FEATURES = ("dur", "proto", "service", "state", "spkts", "dpkts", "sbytes", "dbytes")
CATEGORICAL = ("proto", "service", "state")
INTEGER_FIELDS = ("spkts", "dpkts", "sbytes", "dbytes")
LABEL = "label"
REQUIRED_COLUMNS = FEATURES + (LABEL,)


class DataError(Exception):
    """Base class for every ingestion or preprocessing failure."""


class SchemaError(DataError):
    def __init__(self, column: str, path: str | None = None):
        self.column = column
        where = f" in {path}" if path else ""
        super().__init__(f"missing required column '{column}'{where}")


class RowError(DataError):
    def __init__(self, row: int, column: str, value: str, reason: str = "unparseable value"):
        self.row = row
        self.column = column
        self.value = value
        super().__init__(f"row {row}: {reason} {value!r} in column '{column}'")


class EmptyDataError(DataError):
    pass


class UnseenCategoryError(DataError):
    def __init__(self, field_name: str, value: str):
        self.field = field_name
        self.value = value
        super().__init__(f"unseen category {value!r} for field '{field_name}'")


@dataclass(frozen=True)
class FlowRecord:
    dur: float
    proto: str
    service: str
    state: str
    spkts: int
    dpkts: int
    sbytes: int
    dbytes: int
    label: int

    def __post_init__(self):
        for name in ("dur",) + INTEGER_FIELDS:
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.label not in (0, 1):
            raise ValueError(f"label must be 0 or 1, got {self.label}")


def _parse_int(text: str) -> int:
    # UNSW-NB15 count columns occasionally carry a trailing ".0"
    value = float(text)
    if not value.is_integer():
        raise ValueError(text)
    return int(value)


def load_csv(path: str | Path, schema: Sequence[str] = REQUIRED_COLUMNS) -> list[FlowRecord]:
    """Read flow records from a UNSW-NB15 style CSV file.

    Extra columns (``id``, ``attack_cat`` and the remaining flow statistics)
    are ignored. Row indices in errors count data rows from 1, header excluded.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise EmptyDataError(f"{path}: empty file (no header)")
        header = [h.strip() for h in header]
        for column in schema:
            if column not in header:
                raise SchemaError(column, str(path))
        pos = {name: header.index(name) for name in REQUIRED_COLUMNS}

        records = []
        for row_idx, row in enumerate(reader, start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) < len(header):
                raise RowError(row_idx, header[len(row)], "", "missing cell")
            cells = {name: row[i].strip() for name, i in pos.items()}
            try:
                dur = float(cells["dur"])
                if not math.isfinite(dur):
                    raise ValueError
            except ValueError:
                raise RowError(row_idx, "dur", cells["dur"]) from None
            counts = {}
            for name in INTEGER_FIELDS + (LABEL,):
                try:
                    counts[name] = _parse_int(cells[name])
                except ValueError:
                    raise RowError(row_idx, name, cells[name]) from None
            try:
                rec = FlowRecord(
                    dur=dur,
                    proto=cells["proto"],
                    service=cells["service"],
                    state=cells["state"],
                    **counts,
                )
            except ValueError as exc:
                raise RowError(row_idx, "-", ",".join(row), str(exc)) from None
            records.append(rec)
    if not records:
        raise EmptyDataError(f"{path}: no data rows")
    return records


@dataclass(frozen=True)
class CategoryEncoder:
    """Label encoder for the categorical flow fields, codes in lexicographic order."""

    mapping: dict[str, dict[str, int]]

    def encode(self, field_name: str, value: str) -> int:
        try:
            return self.mapping[field_name][value]
        except KeyError:
            raise UnseenCategoryError(field_name, value) from None


def fit_encoders(records: Iterable[FlowRecord]) -> CategoryEncoder:
    seen: dict[str, set[str]] = {f: set() for f in CATEGORICAL}
    n = 0
    for rec in records:
        n += 1
        for f in CATEGORICAL:
            seen[f].add(getattr(rec, f))
    if n == 0:
        raise DataError("cannot fit encoders on an empty record set")
    return CategoryEncoder({f: {v: i for i, v in enumerate(sorted(vals))} for f, vals in seen.items()})


@dataclass(frozen=True)
class MinMaxScaler:
    mins: np.ndarray
    maxs: np.ndarray

    def __post_init__(self):
        if np.any(self.maxs < self.mins):
            raise ValueError("scaler bounds must satisfy max >= min")

    def transform(self, raw: np.ndarray) -> np.ndarray:
        raw = np.asarray(raw, dtype=float)
        span = self.maxs - self.mins
        safe = np.where(span > 0, span, 1.0)
        out = np.where(span > 0, (raw - self.mins) / safe, 0.0)
        return np.clip(out, 0.0, 1.0)


def fit_scaler(vectors) -> MinMaxScaler:
    arr = np.asarray(vectors, dtype=float)
    if arr.size == 0:
        raise DataError("cannot fit scaler on an empty vector set")
    arr = np.atleast_2d(arr)
    return MinMaxScaler(arr.min(axis=0), arr.max(axis=0))


def raw_vector(record: FlowRecord, enc: CategoryEncoder) -> np.ndarray:
    """Pre-scaling numeric 8-vector: categoricals replaced by their codes."""
    return np.array(
        [
            record.dur,
            enc.encode("proto", record.proto),
            enc.encode("service", record.service),
            enc.encode("state", record.state),
            record.spkts,
            record.dpkts,
            record.sbytes,
            record.dbytes,
        ],
        dtype=float,
    )


def raw_matrix(records: Sequence[FlowRecord], enc: CategoryEncoder) -> np.ndarray:
    out = np.empty((len(records), len(FEATURES)))
    for i, rec in enumerate(records):
        out[i] = raw_vector(rec, enc)
    return out


def transform(record: FlowRecord, enc: CategoryEncoder, scaler: MinMaxScaler) -> np.ndarray:
    return scaler.transform(raw_vector(record, enc))


@dataclass
class Dataset:
    X: np.ndarray
    y: np.ndarray
    tag: str = "train"
    provenance: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        self.X = np.atleast_2d(np.asarray(self.X, dtype=float))
        self.y = np.asarray(self.y, dtype=np.int64)
        if len(self.y) == 0:
            raise DataError("dataset must be non-empty")
        if self.X.shape[0] != len(self.y):
            raise DataError(f"{self.X.shape[0]} feature rows but {len(self.y)} labels")

    def __len__(self) -> int:
        return len(self.y)

    def take(self, idx, tag: str, **extra: str) -> "Dataset":
        prov = dict(self.provenance)
        prov.update(extra)
        return Dataset(self.X[idx], self.y[idx], tag, prov)

    def class_counts(self) -> tuple[int, int]:
        ones = int(self.y.sum())
        return len(self.y) - ones, ones


def concat(parts: Sequence[Dataset], tag: str) -> Dataset:
    prov = {}
    sources = []
    for p in parts:
        if "sources" in p.provenance:
            sources.append(p.provenance["sources"])
    if sources:
        prov["sources"] = ";".join(sources)
    return Dataset(np.vstack([p.X for p in parts]), np.concatenate([p.y for p in parts]), tag, prov)


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def subsample(ds: Dataset, n: int, seed: int, stratified: bool = False) -> Dataset:
    if n < 1 or n > len(ds):
        raise DataError(f"subset size {n} outside 1..{len(ds)}")
    rng = np.random.default_rng(seed)
    if not stratified:
        idx = rng.permutation(len(ds))[:n]
    else:
        by_class = [np.flatnonzero(ds.y == c) for c in (0, 1)]
        # largest-remainder allocation keeps each class within one sample of its share
        quotas = [len(ix) * n / len(ds) for ix in by_class]
        counts = [int(math.floor(q)) for q in quotas]
        short = n - sum(counts)
        order = sorted(range(2), key=lambda c: (-(quotas[c] - counts[c]), c))
        for c in order[:short]:
            counts[c] += 1
        picked = [rng.permutation(ix)[:k] for ix, k in zip(by_class, counts)]
        idx = rng.permutation(np.concatenate(picked))
    out = ds.take(idx, "subset", subset_seed=str(seed), subset_stratified=str(stratified).lower())
    benign, attack = out.class_counts()
    out.provenance.update(subset_benign=str(benign), subset_attack=str(attack))
    return out


def split(ds: Dataset, train_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    if not 0.0 < train_fraction < 1.0:
        raise DataError(f"train fraction must lie strictly between 0 and 1, got {train_fraction}")
    n_train = _round_half_up(train_fraction * len(ds))
    if n_train == 0 or n_train == len(ds):
        raise DataError(f"fraction {train_fraction} leaves an empty side for {len(ds)} samples")
    perm = np.random.default_rng(seed).permutation(len(ds))
    return (
        ds.take(perm[:n_train], "train", split_seed=str(seed)),
        ds.take(perm[n_train:], "test", split_seed=str(seed)),
    )


def file_digest(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


# -- preprocessed dataset files ------------------------------------------------


def write_dataset(ds: Dataset, path: str | Path) -> None:
    """One line per sample: comma-separated features (repr precision) then the label."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row, label in zip(ds.X, ds.y):
            fh.write(",".join(repr(float(v)) for v in row))
            fh.write(f",{int(label)}\n")


def read_dataset(path: str | Path, tag: str = "train") -> Dataset:
    rows, labels = [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            try:
                rows.append([float(p) for p in parts[:-1]])
                labels.append(int(parts[-1]))
            except ValueError:
                raise RowError(lineno, "-", line) from None
    if not rows:
        raise EmptyDataError(f"{path}: no data rows")
    return Dataset(np.array(rows), np.array(labels), tag, {"sources": Path(path).name})


def write_metadata(path: str | Path, enc: CategoryEncoder, scaler: MinMaxScaler, extra: dict) -> None:
    lines = []
    for key in sorted(extra):
        lines.append(f"{key}={extra[key]}")
    for f in CATEGORICAL:
        for value, code in sorted(enc.mapping[f].items(), key=lambda kv: kv[1]):
            lines.append(f"encoder.{f}.{code}={value}")
    for name, lo, hi in zip(FEATURES, scaler.mins, scaler.maxs):
        lines.append(f"scaler.{name}.min={float(lo)!r}")
        lines.append(f"scaler.{name}.max={float(hi)!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_metadata(path: str | Path) -> tuple[CategoryEncoder, MinMaxScaler, dict[str, str]]:
    mapping: dict[str, dict[str, int]] = {f: {} for f in CATEGORICAL}
    bounds: dict[str, list[float]] = {f: [0.0, 0.0] for f in FEATURES}
    extra = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        key, _, value = line.partition("=")
        parts = key.split(".")
        if parts[0] == "encoder" and len(parts) == 3:
            mapping[parts[1]][value] = int(parts[2])
        elif parts[0] == "scaler" and len(parts) == 3:
            bounds[parts[1]][0 if parts[2] == "min" else 1] = float(value)
        else:
            extra[key] = value
    scaler = MinMaxScaler(
        np.array([bounds[f][0] for f in FEATURES]), np.array([bounds[f][1] for f in FEATURES])
    )
    return CategoryEncoder(mapping), scaler, extra
