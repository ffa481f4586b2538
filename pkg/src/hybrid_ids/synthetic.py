"""Synthetic flows with the UNSW-NB15 column layout, for tests and offline demos.

The generator mimics the coarse shape of the real data (attack-heavy label
balance, lognormal byte and packet counts, protocol/service/state mixes that
differ by class) without any claim to statistical fidelity.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

COLUMNS = ("id", "dur", "proto", "service", "state", "spkts", "dpkts", "sbytes", "dbytes", "rate", "attack_cat", "label")

_BENIGN = {
    "proto": (["tcp", "udp", "arp", "ospf"], [0.62, 0.33, 0.03, 0.02]),
    "service": (["-", "http", "dns", "ftp", "smtp", "ssh"], [0.45, 0.2, 0.2, 0.05, 0.06, 0.04]),
    "state": (["FIN", "CON", "INT", "REQ"], [0.55, 0.3, 0.1, 0.05]),
}
_ATTACK = {
    "proto": (["tcp", "udp", "unas", "sctp", "ospf"], [0.45, 0.35, 0.1, 0.05, 0.05]),
    "service": (["-", "dns", "http", "ftp-data", "smtp"], [0.55, 0.25, 0.12, 0.04, 0.04]),
    "state": (["INT", "FIN", "CON", "REQ"], [0.6, 0.3, 0.05, 0.05]),
}
_ATTACK_CATS = ["Generic", "Exploits", "Fuzzers", "DoS", "Reconnaissance"]


def generate(n: int, seed: int, attack_share: float = 0.68, start_id: int = 1) -> list[dict]:
    rng = np.random.default_rng(seed)
    rows = []
    for k in range(n):
        attack = rng.random() < attack_share
        spec = _ATTACK if attack else _BENIGN
        cat = {f: str(rng.choice(v, p=p)) for f, (v, p) in spec.items()}
        if attack:
            dur = float(rng.exponential(0.3))
            spkts = int(rng.lognormal(1.2, 0.8)) + 1
            dpkts = int(rng.lognormal(0.5, 1.0))
            sbytes = int(spkts * rng.lognormal(5.5, 0.9))
            dbytes = int(dpkts * rng.lognormal(4.0, 1.2))
        else:
            dur = float(rng.exponential(1.5))
            spkts = int(rng.lognormal(2.3, 1.0)) + 1
            dpkts = int(rng.lognormal(2.2, 1.1))
            sbytes = int(spkts * rng.lognormal(4.6, 0.8))
            dbytes = int(dpkts * rng.lognormal(6.0, 1.0))
        rate = (spkts + dpkts) / dur if dur > 0 else 0.0
        rows.append(
            {
                "id": start_id + k,
                "dur": f"{dur:.6f}",
                **cat,
                "spkts": spkts,
                "dpkts": dpkts,
                "sbytes": sbytes,
                "dbytes": dbytes,
                "rate": f"{rate:.4f}",
                "attack_cat": str(rng.choice(_ATTACK_CATS)) if attack else "Normal",
                "label": int(attack),
            }
        )
    return rows


def write_csv(rows: list[dict], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


def write_sample(directory: str | Path, n_train: int = 700, n_test: int = 300, seed: int = 15) -> tuple[Path, Path]:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    train, test = d / "synthetic_training_set.csv", d / "synthetic_testing_set.csv"
    write_csv(generate(n_train, seed), train)
    write_csv(generate(n_test, seed + 1, start_id=1), test)
    return train, test


if __name__ == "__main__":
    import sys

    print(*write_sample(sys.argv[1] if len(sys.argv) > 1 else "."), sep="\n")
