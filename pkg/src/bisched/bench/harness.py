from __future__ import annotations

import logging
import time
from collections.abc import Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path

import pandas as pd

from bisched.config.schema import AppConfig
from bisched.core.errors import AppError
from bisched.core.model import Instance
from bisched.core.objectives import Objective
from bisched.core.rational import format_time
from bisched.formats.instance_json import parse_instance
from bisched.solvers.base import SolveRequest
from bisched.solvers.registry import SolverRegistry

logger = logging.getLogger(__name__)

ORACLE_ID = "oracle"
PTAS_ID = "ptas"


@dataclass(frozen=True, slots=True)
class BenchRow:
    instance_id: str
    algorithm: str
    objective: str
    value: str
    wall_time: float
    nodes: int = 0
    states: int = 0
    epsilon: str = ""
    # "ok" либо сообщение об ошибке решателя
    status: str = "ok"


@dataclass(frozen=True, slots=True)
class _Task:
    instance_id: str
    algorithm: str
    epsilon: Fraction | None


def _run_task(
    task: _Task,
    instance: Instance,
    registry: SolverRegistry,
    objective: Objective,
    config: AppConfig,
) -> BenchRow:
    solver = registry.get(task.algorithm)
    request = SolveRequest(objective=objective, epsilon=task.epsilon, config=config)
    epsilon = "" if task.epsilon is None else str(format_time(task.epsilon))
    started = time.perf_counter()
    try:
        result = solver.solve(instance, request)
    except AppError as exc:
        logger.warning("%s на %s: %s", task.algorithm, task.instance_id, exc.user_message)
        return BenchRow(
            task.instance_id,
            task.algorithm,
            objective.value,
            "",
            time.perf_counter() - started,
            epsilon=epsilon,
            status=exc.user_message,
        )
    return BenchRow(
        instance_id=task.instance_id,
        algorithm=task.algorithm,
        objective=objective.value,
        value=str(format_time(result.value)),
        wall_time=time.perf_counter() - started,
        nodes=result.stats.get("nodes", 0),
        states=result.stats.get("states", 0),
        epsilon=epsilon,
    )


def run_bench(
    instances: Mapping[str, Instance],
    algorithms: Sequence[str],
    registry: SolverRegistry,
    config: AppConfig | None = None,
    objective: Objective = Objective.SUM_COMPLETION,
) -> list[BenchRow]:
    """Run every algorithm on every instance; PTAS runs once per configured ε."""
    config = config or AppConfig()
    for algorithm in algorithms:
        registry.get(algorithm)
    epsilons: list[Fraction | None] = [Fraction(raw) for raw in config.bench.epsilons]
    single: list[Fraction | None] = [None]
    tasks = [
        _Task(instance_id, algorithm, epsilon)
        for instance_id in instances
        for algorithm in algorithms
        for epsilon in (epsilons if algorithm == PTAS_ID else single)
    ]
    logger.info("Бенчмарк: инстансов %d, задач %d", len(instances), len(tasks))

    def run(task: _Task) -> BenchRow:
        return _run_task(task, instances[task.instance_id], registry, objective, config)

    if config.bench.workers > 1:
        with ThreadPoolExecutor(max_workers=config.bench.workers) as pool:
            rows = list(pool.map(run, tasks))
    else:
        rows = [run(task) for task in tasks]
    return sorted(rows, key=lambda row: (row.instance_id, row.algorithm, row.epsilon))


def rows_frame(rows: Sequence[BenchRow]) -> pd.DataFrame:
    columns = list(BenchRow.__dataclass_fields__)
    return pd.DataFrame([asdict(row) for row in rows], columns=columns)


def ratio_plot_data(rows: Sequence[BenchRow]) -> pd.DataFrame:
    """Mean and max PTAS/oracle ratio per ε; ratios stay within one instance."""
    oracle = {
        row.instance_id: Fraction(row.value)
        for row in rows
        if row.algorithm == ORACLE_ID and row.status == "ok"
    }
    records: list[dict[str, object]] = []
    for row in rows:
        if row.algorithm != PTAS_ID or row.status != "ok" or row.instance_id not in oracle:
            continue
        best = oracle[row.instance_id]
        ratio = Fraction(row.value) / best if best else Fraction(1)
        records.append({"epsilon": row.epsilon, "ratio": float(ratio)})
    frame = pd.DataFrame(records, columns=["epsilon", "ratio"])
    if frame.empty:
        return pd.DataFrame(columns=["epsilon", "mean_ratio", "max_ratio", "instances"])
    summary = frame.groupby("epsilon", sort=False)["ratio"].agg(["mean", "max", "count"])
    summary = summary.reset_index().rename(
        columns={"mean": "mean_ratio", "max": "max_ratio", "count": "instances"}
    )
    summary["order"] = [Fraction(raw) for raw in summary["epsilon"]]
    summary = summary.sort_values("order", ascending=False).drop(columns="order")
    return summary.reset_index(drop=True)


def write_bench(rows: Sequence[BenchRow], out: Path) -> Path | None:
    """Write the rows CSV and, when PTAS ran next to the oracle, a `<stem>.ratios.csv` beside it."""
    out.parent.mkdir(parents=True, exist_ok=True)
    rows_frame(rows).to_csv(out, index=False)
    plot = ratio_plot_data(rows)
    if plot.empty:
        return None
    plot_path = out.with_name(f"{out.stem}.ratios.csv")
    plot.to_csv(plot_path, index=False)
    return plot_path


def load_corpus(directory: Path) -> dict[str, Instance]:
    corpus: dict[str, Instance] = {}
    for path in sorted(directory.glob("*.json")):
        corpus[path.stem] = parse_instance(path.read_text(encoding="utf-8"))
    return corpus
