"""Run manifest: config snapshot, input digests, artifact digests, timings."""

from __future__ import annotations

import json
from pathlib import Path

from ..data import file_digest

MANIFEST = "manifest.json"


class Manifest:
    def __init__(self, root: Path):
        self.root = Path(root)
        self.path = self.root / MANIFEST
        if self.path.exists():
            self.doc = json.loads(self.path.read_text(encoding="utf-8"))
        else:
            self.doc = {"config": {}, "inputs": {}, "artifacts": {}, "stages": {}, "timings": {}}

    def record_config(self, snapshot: dict[str, str]) -> None:
        self.doc["config"] = snapshot

    def record_input(self, path: str | Path) -> None:
        self.doc["inputs"][str(path)] = file_digest(path)

    def record_artifact(self, path: Path) -> None:
        rel = Path(path).relative_to(self.root).as_posix()
        self.doc["artifacts"][rel] = file_digest(path)

    def record_stage(self, stage: str, info: dict, seconds: float) -> None:
        self.doc["stages"][stage] = info
        self.doc["timings"][stage] = round(seconds, 6)

    def save(self) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        doc = dict(self.doc)
        doc["artifacts"] = dict(sorted(doc["artifacts"].items()))
        self.path.write_text(json.dumps(doc, indent=2, sort_keys=False) + "\n", encoding="utf-8")


def verify(root: Path) -> list[str]:
    """Re-hash every listed artifact; return a list of problems (empty when clean)."""
    m = Manifest(root)
    if not m.path.exists():
        return [f"no manifest at {m.path}"]
    problems = []
    for rel, digest in m.doc["artifacts"].items():
        p = m.root / rel
        if not p.exists():
            problems.append(f"missing: {rel}")
        elif file_digest(p) != digest:
            problems.append(f"digest mismatch: {rel}")
    return problems
