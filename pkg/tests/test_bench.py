from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pandas as pd

from bisched.bench.generator import Profile, gen_random
from bisched.bench.harness import (
    BenchRow,
    load_corpus,
    ratio_plot_data,
    run_bench,
    write_bench,
)
from bisched.config.schema import AppConfig, BenchDefaults
from bisched.core.model import Instance
from bisched.formats.instance_json import serialize_instance
from bisched.solvers import build_builtin_registry


def _corpus() -> dict[str, Instance]:
    corpus: dict[str, Instance] = {}
    for seed in range(3):
        generated = gen_random(3, 1, seed, Profile.GENERAL)
        corpus[f"case-{seed}"] = Instance(generated.segments, generated.jobs)
    return corpus


def _config() -> AppConfig:
    return AppConfig(bench=BenchDefaults(epsilons=["1", "1/2"], workers=2))


def test_runs_every_algorithm_and_epsilon() -> None:
    rows = run_bench(_corpus(), ["oracle", "ptas", "greedy"], build_builtin_registry(), _config())
    assert len(rows) == 3 * (1 + 2 + 1)
    assert all(row.status == "ok" for row in rows)
    by_key = {(row.instance_id, row.algorithm, row.epsilon): row for row in rows}
    for instance_id in _corpus():
        optimum = Fraction(by_key[(instance_id, "oracle", "")].value)
        for epsilon in ("1", "1/2"):
            assert Fraction(by_key[(instance_id, "ptas", epsilon)].value) >= optimum
        assert Fraction(by_key[(instance_id, "greedy", "")].value) >= optimum


def test_solver_errors_become_rows() -> None:
    corpus = {"wide": gen_random(4, 2, 1, Profile.GENERAL)}
    rows = run_bench(corpus, ["dp1"], build_builtin_registry(), AppConfig())
    (row,) = rows
    assert row.value == ""
    assert row.status != "ok"


def test_ratio_data() -> None:
    rows = [
        BenchRow("a", "oracle", "sumc", "4", 0.0),
        BenchRow("a", "ptas", "sumc", "6", 0.0, epsilon="1"),
        BenchRow("b", "oracle", "sumc", "5", 0.0),
        BenchRow("b", "ptas", "sumc", "5", 0.0, epsilon="1"),
        BenchRow("b", "ptas", "sumc", "5", 0.0, epsilon="1/2"),
    ]
    frame = ratio_plot_data(rows)
    assert list(frame["epsilon"]) == ["1", "1/2"]
    assert frame.loc[0, "max_ratio"] == 1.5
    assert frame.loc[0, "mean_ratio"] == 1.25
    assert frame.loc[1, "instances"] == 1


def test_csv_output(tmp_path: Path) -> None:
    rows = run_bench(_corpus(), ["oracle", "ptas"], build_builtin_registry(), _config())
    out = tmp_path / "bench" / "rows.csv"
    ratios = write_bench(rows, out)
    assert ratios == tmp_path / "bench" / "rows.ratios.csv"
    frame = pd.read_csv(out, dtype={"value": str, "epsilon": str})
    assert len(frame) == len(rows)
    assert set(frame["algorithm"]) == {"oracle", "ptas"}
    assert write_bench(rows[:1], tmp_path / "only.csv") is None


def test_corpus_from_directory(tmp_path: Path) -> None:
    for name, instance in _corpus().items():
        (tmp_path / f"{name}.json").write_text(serialize_instance(instance), encoding="utf-8")
    (tmp_path / "notes.txt").write_text("не инстанс", encoding="utf-8")
    corpus = load_corpus(tmp_path)
    assert sorted(corpus) == ["case-0", "case-1", "case-2"]
