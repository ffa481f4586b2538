"""Binary classification metrics with attack (label 1) as the positive class."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

CLASS_NAMES = ("Benign", "Attack")


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def as_rows(self) -> list[list[int]]:
        """Rows are true class (benign, attack), columns predicted class."""
        return [[self.tn, self.fp], [self.fn, self.tp]]


@dataclass(frozen=True)
class ClassRow:
    name: str
    precision: float
    recall: float
    f1: float
    support: int


@dataclass
class MetricsReport:
    accuracy: float
    classes: tuple[ClassRow, ClassRow]
    macro: tuple[float, float, float]
    weighted: tuple[float, float, float]
    confusion: ConfusionMatrix
    zero_division: list[str] = field(default_factory=list)

    @property
    def attack(self) -> ClassRow:
        return self.classes[1]

    @property
    def benign(self) -> ClassRow:
        return self.classes[0]


def confusion(y_true, y_pred) -> ConfusionMatrix:
    t = np.asarray(y_true)
    p = np.asarray(y_pred)
    if t.shape != p.shape or t.ndim != 1:
        raise ValueError(f"label arrays differ in shape: {t.shape} vs {p.shape}")
    if t.size == 0:
        raise ValueError("need at least one sample")
    for arr in (t, p):
        if not np.all(np.isin(arr, (0, 1))):
            raise ValueError("labels must be 0 (benign) or 1 (attack)")
    return ConfusionMatrix(
        tp=int(np.sum((t == 1) & (p == 1))),
        fp=int(np.sum((t == 0) & (p == 1))),
        tn=int(np.sum((t == 0) & (p == 0))),
        fn=int(np.sum((t == 1) & (p == 0))),
    )


def _ratio(num: float, den: float, cell: str, flags: list[str]) -> float:
    if den == 0:
        flags.append(cell)
        return 0.0
    return num / den


def summarize(cm: ConfusionMatrix) -> MetricsReport:
    if cm.total == 0:
        raise ValueError("cannot summarise an empty confusion matrix")
    flags: list[str] = []
    rows = []
    # (name, true positives, predicted-as-class, actual class) for each class
    for name, hit, pred, actual in (
        ("Benign", cm.tn, cm.tn + cm.fn, cm.tn + cm.fp),
        ("Attack", cm.tp, cm.tp + cm.fp, cm.tp + cm.fn),
    ):
        key = name.lower()
        p = _ratio(hit, pred, f"{key}.precision", flags)
        r = _ratio(hit, actual, f"{key}.recall", flags)
        f1 = _ratio(2 * p * r, p + r, f"{key}.f1", flags)
        rows.append(ClassRow(name, p, r, f1, actual))
    total = cm.total
    macro = tuple(float(np.mean([getattr(r, m) for r in rows])) for m in ("precision", "recall", "f1"))
    weighted = tuple(
        sum(getattr(r, m) * r.support for r in rows) / total for m in ("precision", "recall", "f1")
    )
    return MetricsReport(
        accuracy=(cm.tp + cm.tn) / total,
        classes=(rows[0], rows[1]),
        macro=macro,
        weighted=weighted,
        confusion=cm,
        zero_division=flags,
    )


def evaluate(y_true, y_pred) -> MetricsReport:
    return summarize(confusion(y_true, y_pred))


def render_text(r: MetricsReport, digits: int = 2, title: str | None = None) -> str:
    width = max(12, digits + 8)
    head = f"{'':>14}" + "".join(f"{h:>{width}}" for h in ("precision", "recall", "f1-score")) + f"{'support':>10}"
    fmt = f"{{:>{width}.{digits}f}}"
    lines = [title] if title else []
    lines += [head, ""]
    for row in r.classes:
        lines.append(
            f"{row.name:>14}" + "".join(fmt.format(v) for v in (row.precision, row.recall, row.f1)) + f"{row.support:>10}"
        )
    lines.append("")
    total = r.confusion.total
    lines.append(f"{'Accuracy':>14}" + " " * (2 * width) + fmt.format(r.accuracy) + f"{total:>10}")
    lines.append(f"{'Macro Avg':>14}" + "".join(fmt.format(v) for v in r.macro) + f"{total:>10}")
    lines.append(f"{'Weighted Avg':>14}" + "".join(fmt.format(v) for v in r.weighted) + f"{total:>10}")
    cm = r.confusion
    lines += [
        "",
        "Confusion matrix (rows true, columns predicted):",
        f"{'':>14}{'Benign':>10}{'Attack':>10}",
        f"{'Benign':>14}{cm.tn:>10}{cm.fp:>10}",
        f"{'Attack':>14}{cm.fn:>10}{cm.tp:>10}",
    ]
    if r.zero_division:
        lines.append("zero-division cells reported as 0: " + ", ".join(r.zero_division))
    return "\n".join(lines) + "\n"


def to_kv(r: MetricsReport, prefix: str = "") -> dict[str, str]:
    cm = r.confusion
    out = {
        "accuracy": repr(r.accuracy),
        "tp": str(cm.tp),
        "fp": str(cm.fp),
        "tn": str(cm.tn),
        "fn": str(cm.fn),
    }
    for row in r.classes:
        key = row.name.lower()
        out[f"{key}.precision"] = repr(row.precision)
        out[f"{key}.recall"] = repr(row.recall)
        out[f"{key}.f1"] = repr(row.f1)
        out[f"{key}.support"] = str(row.support)
    for avg, vals in (("macro", r.macro), ("weighted", r.weighted)):
        for m, v in zip(("precision", "recall", "f1"), vals):
            out[f"{avg}.{m}"] = repr(float(v))
    out["zero_division"] = ";".join(r.zero_division)
    return {prefix + k: v for k, v in out.items()}


def render_kv(r: MetricsReport) -> str:
    return "".join(f"{k}={v}\n" for k, v in to_kv(r).items())


def from_kv(kv: dict[str, str], prefix: str = "") -> MetricsReport:
    g = lambda k: kv[prefix + k]  # noqa: E731
    rows = tuple(
        ClassRow(
            name,
            float(g(f"{name.lower()}.precision")),
            float(g(f"{name.lower()}.recall")),
            float(g(f"{name.lower()}.f1")),
            int(g(f"{name.lower()}.support")),
        )
        for name in CLASS_NAMES
    )
    zd = g("zero_division")
    return MetricsReport(
        accuracy=float(g("accuracy")),
        classes=rows,
        macro=tuple(float(g(f"macro.{m}")) for m in ("precision", "recall", "f1")),
        weighted=tuple(float(g(f"weighted.{m}")) for m in ("precision", "recall", "f1")),
        confusion=ConfusionMatrix(int(g("tp")), int(g("fp")), int(g("tn")), int(g("fn"))),
        zero_division=zd.split(";") if zd else [],
    )


def parse_kv(text: str) -> dict[str, str]:
    out = {}
    for line in text.splitlines():
        if line.strip() and not line.startswith("#"):
            k, _, v = line.partition("=")
            out[k] = v
    return out


def parse_report(text: str) -> MetricsReport:
    return from_kv(parse_kv(text))


def render_report(r: MetricsReport, fmt: str = "text", digits: int = 2) -> str:
    if fmt == "text":
        return render_text(r, digits)
    if fmt in ("kv", "machine"):
        return render_kv(r)
    raise ValueError(f"unknown report format {fmt!r}")


def confusion_csv(cm: ConfusionMatrix) -> str:
    rows = cm.as_rows()
    return (
        "true\\pred,benign,attack\n"
        f"benign,{rows[0][0]},{rows[0][1]}\n"
        f"attack,{rows[1][0]},{rows[1][1]}\n"
    )
