import numpy as np
import pytest

from hybrid_ids.data import FlowRecord

HEADER = "id,dur,proto,service,state,spkts,dpkts,sbytes,dbytes,attack_cat,label\n"


@pytest.fixture
def write_csv(tmp_path):
    def _write(rows, header=HEADER, name="flows.csv"):
        p = tmp_path / name
        p.write_text(header + "".join(r + "\n" for r in rows), encoding="utf-8")
        return p

    return _write


def make_record(proto="tcp", service="-", state="FIN", dur=0.5, counts=(1, 2, 3, 4), label=0):
    return FlowRecord(dur, proto, service, state, *counts, label)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
