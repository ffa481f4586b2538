import json
import shutil

import numpy as np
import pytest

from hybrid_ids import data as D
from hybrid_ids.classical import load_model
from hybrid_ids.metrics import parse_kv
from hybrid_ids.pipeline import cli
from hybrid_ids.pipeline.config import ConfigError, derive_seed, load_config, parse_lines, sample_path
from hybrid_ids.pipeline.stages import REPORT_ROWS, parse_comparison
from hybrid_ids.quantum import read_embeddings, read_weights


def run(*args):
    return cli.main([str(a) for a in args])


@pytest.fixture(scope="module")
def full_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("full") / "run"
    assert run("all", "--out", out, "--seed", 0) == 0
    return out


def test_defaults_point_at_bundled_sample():
    cfg = load_config()
    assert cfg.train_csv.endswith("synthetic_training_set.csv")
    assert cfg.n_qubits == 8 and cfg.subset_size == 200 and cfg.split_fraction == 0.8
    assert cfg.depth == 2 and cfg.C == 1.0 and cfg.tol == 1e-3


def test_file_then_override_precedence(tmp_path):
    p = tmp_path / "exp.cfg"
    p.write_text("# comment\n\ndepth = 3\nseed=5\nfeatures=dur,proto\n")
    cfg = load_config(p, {"depth": "1"})
    assert (cfg.depth, cfg.seed, cfg.features, cfg.n_qubits) == (1, 5, ("dur", "proto"), 2)
    assert load_config(p).depth == 3


@pytest.mark.parametrize(
    "overrides",
    [
        {"colour": "blue"},
        {"depth": "0"},
        {"depth": "two"},
        {"features": "dur,dur"},
        {"features": "ttl"},
        {"split_fraction": "1.0"},
        {"gamma": "-1"},
        {"class_weight": "auto"},
        {"models": "forest"},
        {"stratified": "maybe"},
    ],
)
def test_bad_config_rejected(overrides):
    with pytest.raises(ConfigError):
        load_config(None, overrides)


def test_parse_lines_requires_equals():
    with pytest.raises(ConfigError, match="line 2"):
        parse_lines("a=1\nnonsense\n")


def test_snapshot_round_trips_through_config_file(tmp_path):
    cfg = load_config(None, {"seed": "9", "stratified": "yes", "weight_seed": "4"})
    p = tmp_path / "snap.cfg"
    p.write_text(cfg.dump())
    assert load_config(p).snapshot() == cfg.snapshot()


def test_derive_seed_stable_and_distinct():
    assert derive_seed(0, "subset") == derive_seed(0, "subset")
    assert len({derive_seed(0, "subset"), derive_seed(0, "split"), derive_seed(1, "subset")}) == 3
    assert 0 <= derive_seed(123, "weights") < 2**63


def test_cli_config_error_exit_code(tmp_path, capsys):
    assert run("show-config", "--set", "nope=1") == 1
    assert "nope" in capsys.readouterr().err
    assert run("show-config", "--set", "depth") == 1


def test_show_config(capsys):
    assert run("show-config", "--seed", 42) == 0
    assert "seed=42" in capsys.readouterr().out.splitlines()


def test_missing_column_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("id,dur,proto,state,spkts,dpkts,sbytes,dbytes,label\n1,0.1,tcp,FIN,1,1,1,1,0\n")
    code = run("preprocess", "--out", tmp_path / "o", "--set", f"train_csv={bad}", "--set", f"test_csv={bad}")
    assert code == 2
    assert "service" in capsys.readouterr().err


def test_stage_before_preprocess_is_data_error(tmp_path, capsys):
    assert run("baseline", "--out", tmp_path / "o") == 2
    assert "preprocess" in capsys.readouterr().err


def test_full_run_layout(full_run):
    for rel in [
        "preprocess/train.csv",
        "preprocess/test.csv",
        "preprocess/preprocess.meta",
        "baseline/summary.txt",
        "small_sample/subset_train.csv",
        "quantum/weights.txt",
        "quantum/embeddings_train.csv",
        "quantum/svm.model",
        "report/comparison.txt",
    ]:
        assert (full_run / rel).is_file(), rel
    for stage in ("baseline", "small_sample"):
        for m in ("logreg", "linear_svm", "rbf_svm"):
            for suffix in (".model", ".report.kv", ".report.txt", ".confusion.csv"):
                assert (full_run / stage / f"{m}{suffix}").is_file()


def test_full_run_manifest(full_run, capsys):
    doc = json.loads((full_run / "manifest.json").read_text())
    assert set(doc["stages"]) == {"preprocess", "baseline", "small_sample", "quantum", "report"}
    assert doc["config"]["seed"] == "0"
    assert len(doc["inputs"]) == 2
    assert run("verify-manifest", "--out", full_run) == 0


def test_preprocessed_data_in_unit_cube(full_run):
    for name in ("train", "test"):
        ds = D.read_dataset(full_run / "preprocess" / f"{name}.csv")
        assert ds.X.shape[1] == 8
        assert ds.X.min() >= 0.0 and ds.X.max() <= 1.0
    meta = parse_kv((full_run / "preprocess" / "preprocess.meta").read_text())
    assert (meta["train_rows"], meta["test_rows"]) == ("700", "300")


def test_small_sample_and_quantum_share_the_subset(full_run):
    for name in ("subset_train.csv", "subset_test.csv"):
        a = (full_run / "small_sample" / name).read_bytes()
        assert a == (full_run / "quantum" / name).read_bytes()
    tr = D.read_dataset(full_run / "quantum" / "subset_train.csv")
    te = D.read_dataset(full_run / "quantum" / "subset_test.csv")
    assert (len(tr), len(te)) == (160, 40)


def test_embeddings_bounded_and_consistent(full_run):
    E, y = read_embeddings(full_run / "quantum" / "embeddings_train.csv")
    assert E.shape == (160, 8)
    assert np.all(np.abs(E) <= 1.0)
    w = read_weights(full_run / "quantum" / "weights.txt")
    assert w.depth == 2 and w.n_qubits == 8
    model = load_model(full_run / "quantum" / "svm.model")
    assert model.support_vectors.shape[1] == 8


def test_report_has_seven_rows(full_run):
    rows = parse_comparison((full_run / "report" / "comparison.kv").read_text())
    assert set(rows) == {(s, n) for s, n, *_ in REPORT_ROWS}
    for metrics in rows.values():
        assert set(metrics) == {"accuracy", "attack.precision", "attack.recall", "attack.f1", "macro.f1"}
        assert all(0.0 <= v <= 1.0 for v in metrics.values())
    text = (full_run / "report" / "comparison.txt").read_text()
    assert "Quantum Embedding + SVM" in text and "Not run" not in text


def test_rerun_is_identical(full_run, tmp_path):
    other = tmp_path / "again"
    assert run("all", "--out", other, "--seed", 0) == 0
    a = json.loads((full_run / "manifest.json").read_text())["artifacts"]
    b = json.loads((other / "manifest.json").read_text())["artifacts"]
    assert a == b


def test_seed_changes_subset(full_run, tmp_path):
    out = tmp_path / "s1"
    shutil.copytree(full_run / "preprocess", out / "preprocess")
    assert run("small-sample", "--out", out, "--seed", 1, "--set", "models=logreg") == 0
    assert (out / "small_sample" / "subset_train.csv").read_bytes() != (full_run / "small_sample" / "subset_train.csv").read_bytes()


def test_tampered_artifact_detected(full_run, tmp_path, capsys):
    out = tmp_path / "copy"
    shutil.copytree(full_run, out)
    with open(out / "baseline" / "summary.txt", "a") as fh:
        fh.write("x")
    (out / "quantum" / "weights.txt").unlink()
    assert run("verify-manifest", "--out", out) == 2
    err = capsys.readouterr().err
    assert "digest mismatch: baseline/summary.txt" in err and "missing: quantum/weights.txt" in err


def test_stages_do_not_reread_raw_csvs(tmp_path):
    raw = tmp_path / "raw"
    raw.mkdir()
    for name in ("synthetic_training_set.csv", "synthetic_testing_set.csv"):
        shutil.copy(sample_path(name), raw / name)
    sets = ["--set", f"train_csv={raw / 'synthetic_training_set.csv'}", "--set", f"test_csv={raw / 'synthetic_testing_set.csv'}"]
    out = tmp_path / "o"
    assert run("preprocess", "--out", out, *sets) == 0
    shutil.rmtree(raw)
    assert run("quantum", "--out", out, *sets) == 0
    assert run("small-sample", "--out", out, *sets, "--set", "models=linear_svm") == 0


def test_partial_report_lists_missing_rows(full_run, tmp_path):
    out = tmp_path / "partial"
    shutil.copytree(full_run / "preprocess", out / "preprocess")
    assert run("baseline", "--out", out) == 0
    assert run("report", "--out", out) == 0
    rows = parse_comparison((out / "report" / "comparison.kv").read_text())
    assert set(rows) == {("baseline", "logreg"), ("baseline", "linear_svm"), ("baseline", "rbf_svm")}
    text = (out / "report" / "comparison.txt").read_text()
    assert "Not run:" in text and "Quantum Embedding + SVM" in text


def test_report_without_outputs_fails(tmp_path):
    assert run("report", "--out", tmp_path / "empty") == 2


def test_single_model_selection(full_run, tmp_path):
    out = tmp_path / "one"
    shutil.copytree(full_run / "preprocess", out / "preprocess")
    assert run("baseline", "--out", out, "--set", "models=linear_svm") == 0
    assert sorted(p.name for p in (out / "baseline").glob("*.report.kv")) == ["linear_svm.report.kv"]


def test_feature_subset_sets_qubit_count(full_run, tmp_path):
    out = tmp_path / "feat"
    shutil.copytree(full_run / "preprocess", out / "preprocess")
    assert run("quantum", "--out", out, "--set", "features=dur,sbytes,dbytes") == 0
    E, _ = read_embeddings(out / "quantum" / "embeddings_test.csv")
    assert E.shape == (40, 3)


def test_stratified_subset_matches_corpus_ratio(full_run, tmp_path):
    out = tmp_path / "strat"
    shutil.copytree(full_run / "preprocess", out / "preprocess")
    assert run("small-sample", "--out", out, "--set", "stratified=true", "--set", "models=logreg") == 0
    tr = D.read_dataset(out / "small_sample" / "subset_train.csv")
    te = D.read_dataset(out / "small_sample" / "subset_test.csv")
    corpus = np.concatenate(
        [D.read_dataset(full_run / "preprocess" / f"{n}.csv").y for n in ("train", "test")]
    )
    assert abs(tr.y.sum() + te.y.sum() - corpus.mean() * 200) <= 1


def test_single_class_training_split_is_reported(tmp_path, write_csv, capsys):
    p = write_csv([f"{i},0.{i},tcp,-,FIN,{i},1,1,1,Normal,0" for i in range(1, 9)])
    sets = ["--set", f"train_csv={p}", "--set", f"test_csv={p}", "--set", "subset_size=10"]
    assert run("preprocess", "--out", tmp_path / "o", *sets) == 0
    assert run("small-sample", "--out", tmp_path / "o", *sets) == 2
    assert "single class" in capsys.readouterr().err
    assert run("quantum", "--out", tmp_path / "o", *sets) == 2


def test_summary_lists_training_rows(full_run):
    lines = (full_run / "baseline" / "summary.txt").read_text().splitlines()
    assert lines[0].split()[-2:] == ["Training", "rows"]
    assert [ln.split()[-1] for ln in lines[1:]] == ["700", "700", "700"]


def test_rbf_subsample_caps_training_rows(full_run, tmp_path):
    out = tmp_path / "cap"
    shutil.copytree(full_run / "preprocess", out / "preprocess")
    assert run("baseline", "--out", out, "--set", "rbf_subsample=150", "--set", "models=rbf_svm") == 0
    assert (out / "baseline" / "summary.txt").read_text().splitlines()[1].split()[-1] == "150"


def test_four_decimal_reports(full_run, tmp_path):
    out = tmp_path / "digits"
    shutil.copytree(full_run / "preprocess", out / "preprocess")
    assert run("quantum", "--out", out, "--set", "report_digits=4") == 0
    acc = float(parse_kv((out / "quantum" / "svm.report.kv").read_text())["accuracy"])
    assert f"{acc:.4f}" in (out / "quantum" / "svm.report.txt").read_text()
    assert run("show-config", "--set", "report_digits=3") == 1
