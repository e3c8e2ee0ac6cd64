from __future__ import annotations

import json
import sys
from pathlib import Path

import pytest

from bisched import cli
from bisched.config.paths import PORTABLE_ENV


@pytest.fixture
def workdir(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> Path:
    monkeypatch.setenv(PORTABLE_ENV, "1")
    monkeypatch.chdir(tmp_path)
    return tmp_path


def _run(monkeypatch: pytest.MonkeyPatch, *args: str) -> int:
    monkeypatch.setattr(sys, "argv", ["bisched", *args])
    with pytest.raises(SystemExit) as info:
        cli.main()
    return int(info.value.code or 0)


def test_generate_solve_validate(
    monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str], workdir: Path
) -> None:
    instance = workdir / "case.json"
    args = ("gen", "random", "--n", "3", "--m", "2", "--seed", "7", "--out", str(instance))
    assert _run(monkeypatch, *args) == 0
    assert instance.exists()

    schedule = workdir / "out" / "schedule.json"
    solve = ("solve", str(instance), "--algo", "oracle", "--out", str(schedule))
    assert _run(monkeypatch, *solve) == 0
    report = json.loads((workdir / "out" / "schedule.report.json").read_text(encoding="utf-8"))
    assert report["solver"] == "oracle"
    assert report["objective"] == "sumc"

    capsys.readouterr()
    assert _run(monkeypatch, "validate", str(instance), "--schedule", str(schedule)) == 0
    assert "Расписание допустимо." in capsys.readouterr().out


def test_validate_reports_violations(
    monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str], workdir: Path
) -> None:
    instance = workdir / "pair.json"
    instance.write_text(
        json.dumps(
            {
                "segments": [{"transit": 1}],
                "jobs": [
                    {"id": 1, "dir": "R", "release": 0, "proc": 1, "start": 1, "target": 1},
                    {"id": 2, "dir": "L", "release": 0, "proc": 1, "start": 1, "target": 1},
                ],
            }
        ),
        encoding="utf-8",
    )
    schedule = workdir / "clash.json"
    schedule.write_text('{"starts": {"1": {"1": 0}, "2": {"1": 1}}}', encoding="utf-8")
    assert _run(monkeypatch, "validate", str(instance), "--schedule", str(schedule)) == 1
    assert "условие 4" in capsys.readouterr().out


def test_precondition_errors_exit_with_two(
    monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str], workdir: Path
) -> None:
    instance = workdir / "wide.json"
    _run(monkeypatch, "gen", "random", "--n", "3", "--m", "2", "--out", str(instance))
    capsys.readouterr()
    assert _run(monkeypatch, "solve", str(instance), "--algo", "dp1") == 2
    assert "Ошибка:" in capsys.readouterr().out
    assert _run(monkeypatch, "solve", str(instance), "--algo", "nope") == 2
    assert _run(monkeypatch, "solve", str(workdir / "absent.json"), "--algo", "oracle") == 2


def test_reduction_generators(
    monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str], workdir: Path
) -> None:
    formula = workdir / "f.cnf"
    formula.write_text("p cnf 3 1\n1 2 3 0\n", encoding="utf-8")
    out = workdir / "sat.json"
    index = workdir / "sat.index.json"
    args = ("gen", "sat", str(formula), "--out", str(out), "--index", str(index))
    assert _run(monkeypatch, *args) == 0
    assert len(json.loads(out.read_text(encoding="utf-8"))["jobs"]) == 68
    assert json.loads(index.read_text(encoding="utf-8"))["kind"] == "sat"

    graph = workdir / "g.txt"
    graph.write_text("0 1\n", encoding="utf-8")
    maxcut = workdir / "maxcut.json"
    args = ("gen", "maxcut", str(graph), "--k", "1", "--lemma-scale", "--out", str(maxcut))
    assert _run(monkeypatch, *args) == 0
    assert maxcut.exists()

    bad = workdir / "bad.cnf"
    bad.write_text("p cnf 2 1\n1 2 0\n", encoding="utf-8")
    capsys.readouterr()
    assert _run(monkeypatch, "gen", "sat", str(bad)) == 2


def test_gadgets_and_config(
    monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str], workdir: Path
) -> None:
    assert _run(monkeypatch, "gadgets") == 0
    kinds = {item["kind"] for item in json.loads(capsys.readouterr().out)}
    assert len(kinds) == 4
    assert _run(monkeypatch, "show-config") == 0
    payload = json.loads(capsys.readouterr().out)
    assert "oracle" in payload["solvers"]
    assert (workdir / "data" / "logs").is_dir()


def test_bench_command(monkeypatch: pytest.MonkeyPatch, workdir: Path) -> None:
    corpus = workdir / "corpus"
    corpus.mkdir()
    for seed in range(2):
        target = corpus / f"c{seed}.json"
        _run(monkeypatch, "gen", "random", "--n", "3", "--seed", str(seed), "--out", str(target))
    out = workdir / "bench.csv"
    args = ("bench", "--dir", str(corpus), "--algos", "oracle,greedy", "--out", str(out))
    assert _run(monkeypatch, *args) == 0
    assert out.exists()
    empty = workdir / "empty"
    empty.mkdir()
    args = ("bench", "--dir", str(empty), "--algos", "oracle", "--out", str(out))
    assert _run(monkeypatch, *args) == 2
