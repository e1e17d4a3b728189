"""Tests for the ``dhc`` command line."""
import io
import json

import pytest

from dhc_classifier import cli
from dhc_classifier.models.reports import GradcheckReport


def _train(workspace, capsys, *extra):
    assert cli.run(["train", "--config", str(workspace / "dhc.conf"), *extra]) == 0
    return capsys.readouterr().out


def test_train_prints_last_epoch(tiny_workspace, capsys):
    record = json.loads(_train(tiny_workspace, capsys))
    assert record["epoch"] == 3
    assert len(record["mean_lloss"]) == 2
    assert (tiny_workspace / "model.ckpt").exists()


def test_train_ablation_switches(tiny_workspace, capsys):
    record = json.loads(_train(tiny_workspace, capsys, "--seed", "4", "--beta0", "--independent-rep"))
    assert record["mean_J"] == pytest.approx(sum(record["mean_lloss"]), rel=1e-12)


def test_eval_writes_report(tiny_workspace, capsys):
    _train(tiny_workspace, capsys)
    out = tiny_workspace / "report.json"
    code = cli.run([
        "eval",
        "--checkpoint", str(tiny_workspace / "model.ckpt"),
        "--data", str(tiny_workspace / "test.tsv"),
        "--taxonomy", str(tiny_workspace / "taxonomy.tsv"),
        "--decoder", "beam",
        "--beam-width", "2",
        "--report", str(out),
    ])
    assert code == 0
    printed = json.loads(capsys.readouterr().out)
    assert printed["decoder"] == "beam"
    assert printed["sample_count"] == 12
    assert printed["consistency_rate"] == 1.0
    assert json.loads(out.read_text()) == printed


def test_predict_reads_stdin(tiny_workspace, capsys, monkeypatch):
    _train(tiny_workspace, capsys)
    monkeypatch.setattr("sys.stdin", io.StringIO("apple apricot\nbanana berry\n\n"))
    assert cli.run(["predict", "--checkpoint", str(tiny_workspace / "model.ckpt")]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 3
    for line in lines:
        fields = line.split("\t")
        assert len(fields) == 3
        assert fields[0] in ("Fruit A", "Fruit B")


def test_predict_empty_input(tiny_workspace, capsys, monkeypatch):
    _train(tiny_workspace, capsys)
    monkeypatch.setattr("sys.stdin", io.StringIO(""))
    assert cli.run(["predict", "--checkpoint", str(tiny_workspace / "model.ckpt")]) == 0
    assert capsys.readouterr().out == ""


def test_gen_data(tmp_path, capsys):
    assert cli.run(["gen-data", "--preset", "deep", "--out-dir", str(tmp_path), "--seed", "3"]) == 0
    roles = dict(line.split("\t") for line in capsys.readouterr().out.splitlines())
    assert set(roles) == {"taxonomy", "data", "train", "test", "config"}
    assert "seed = 3" in (tmp_path / "dhc.conf").read_text()


def test_gradcheck(capsys):
    assert cli.run(["gradcheck", "--seed", "2", "--trials", "2"]) == 0
    assert capsys.readouterr().out.startswith("max relative error: ")


def test_gradcheck_failure_exits_three(monkeypatch):
    failing = GradcheckReport(trials=1, max_relative_error=0.5, worst_parameter="trial 0: x", tolerance=1e-5)
    monkeypatch.setattr(cli, "run_gradcheck", lambda seed, trials: failing)
    assert cli.run(["gradcheck"]) == 3


def test_ablate(tiny_workspace, capsys):
    out = tiny_workspace / "ablation.json"
    assert cli.run(["ablate", "--config", str(tiny_workspace / "dhc.conf"), "--seeds", "1", "--out", str(out)]) == 0
    names = [line.split("\t")[0] for line in capsys.readouterr().out.splitlines()]
    assert names == ["dhc", "dhc_hen", "dhc_hln", "flat"]
    assert json.loads(out.read_text())["seeds"] == [1]


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["train"],
        ["bogus"],
        ["gen-data", "--preset", "nope", "--out-dir", "x"],
        ["ablate", "--config", "x", "--seeds", "a,b"],
        ["--log-level", "chatty", "gradcheck", "--trials", "1"],
    ],
)
def test_usage_errors_exit_one(argv):
    assert cli.run(argv) == 1


def test_missing_config_exits_one(tmp_path):
    assert cli.run(["train", "--config", str(tmp_path / "absent.conf")]) == 1


def test_data_errors_exit_two(tiny_workspace, capsys):
    _train(tiny_workspace, capsys)
    bad = tiny_workspace / "bad.tsv"
    bad.write_text("zz\tunknown leaf\n", encoding="utf-8")
    code = cli.run([
        "eval",
        "--checkpoint", str(tiny_workspace / "model.ckpt"),
        "--data", str(bad),
        "--taxonomy", str(tiny_workspace / "taxonomy.tsv"),
    ])
    assert code == 2


def test_taxonomy_mismatch_exits_two(tiny_workspace, capsys):
    _train(tiny_workspace, capsys)
    other = tiny_workspace / "other.tsv"
    other.write_text("a\tROOT\nb\tROOT\na1\ta\nb1\tb\n", encoding="utf-8")
    code = cli.run([
        "eval",
        "--checkpoint", str(tiny_workspace / "model.ckpt"),
        "--data", str(tiny_workspace / "test.tsv"),
        "--taxonomy", str(other),
    ])
    assert code == 2
