import json
import subprocess
import sys

import pytest

from supermatch.cli import main

M5 = "4 5 6 3 1 2 0"


def test_rotations(sample_path, capsys):
    assert main(["rotations", str(sample_path)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "|V| = 6"
    assert out[1].startswith("ρ0: [")
    assert sorted(out[-5:]) == ["ρ0 -> ρ1", "ρ1 -> ρ2", "ρ1 -> ρ4", "ρ2 -> ρ3", "ρ4 -> ρ5"]


def test_verify(sample_path, capsys):
    assert main(["verify", str(sample_path), "--matching", M5]) == 0
    out = capsys.readouterr().out
    assert "b = 3" in out
    assert "  3   inf       4    3" in out
    assert main(["verify", str(sample_path), "--matching", M5, "--b", "3"]) == 0
    assert main(["verify", str(sample_path), "--matching", M5, "--b", "2"]) == 1


def test_verify_errors(sample_path, tmp_path, capsys):
    assert main(["verify", str(sample_path), "--matching", "0 1 2 3 4 5 6"]) == 2
    assert main(["verify", str(sample_path), "--matching", "1 2"]) == 2
    with pytest.raises(SystemExit):
        main(["verify", str(tmp_path / "nope.txt"), "--matching", M5])


@pytest.mark.parametrize("method", ["exact", "ls", "ga"])
def test_solve_json(sample_path, tmp_path, method):
    out = tmp_path / "r.json"
    assert main(["solve", str(sample_path), "--method", method, "--seed", "4", "--out", str(out)]) == 0
    res = json.loads(out.read_text())
    assert list(res) == [
        "instance", "method", "seed", "best_b", "matching", "closed_subset",
        "iterations", "evaluations", "elapsed_ms", "termination",
    ]
    assert res["best_b"] == 1 and res["closed_subset"] == [0, 1, 2, 4]
    assert res["elapsed_ms"] is None


def test_solve_timing(sample_path, capsys):
    assert main(["solve", str(sample_path), "--timing"]) == 0
    assert json.loads(capsys.readouterr().out)["elapsed_ms"] >= 0


def test_solve_bad_config(sample_path, capsys):
    assert main(["solve", str(sample_path), "--pop", "1"]) == 2
    assert main(["solve", str(sample_path), "--method", "exact", "--ideal-budget", "2"]) == 2


def test_gen_and_bench(tmp_path, capsys):
    d = tmp_path / "inst"
    assert main(["gen", "--sizes", "8,10", "--count", "2", "--seed", "1", "--out", str(d)]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 4
    out = tmp_path / "runs.csv"
    rc = main([
        "bench", "--instances", str(d), "--methods", "ls,ga,exact", "--seeds", "2",
        "--cutoff", "100", "--out", str(out), "--traces", str(tmp_path / "t.jsonl"),
    ])
    assert rc == 0
    assert len(out.read_text().splitlines()) == 1 + 4 * 3 * 2
    scores = (tmp_path / "runs.scores.csv").read_text().splitlines()
    assert scores[0] == "instance,method,score" and len(scores) == 1 + 4 * 3
    assert "mean score" in capsys.readouterr().out


def test_bench_bad_method(tmp_path, sample_path):
    with pytest.raises(SystemExit):
        main(["bench", "--instances", str(sample_path), "--methods", "cp", "--out", str(tmp_path / "x.csv")])


def test_module_entry_point(sample_path):
    proc = subprocess.run(
        [sys.executable, "-m", "supermatch", "rotations", str(sample_path)],
        capture_output=True, text=True, check=True,
    )
    assert proc.stdout.startswith("|V| = 6")
