from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any

from dotenv import load_dotenv

from bisched.bench.generator import Profile, gen_random
from bisched.bench.harness import load_corpus, run_bench, write_bench
from bisched.config.env import apply_env_overrides
from bisched.config.paths import PORTABLE_ENV
from bisched.config.schema import AppConfig
from bisched.config.store import ConfigStore
from bisched.core.errors import AppError, InfeasibleSchedule
from bisched.core.logging_setup import configure_logging
from bisched.core.objectives import Objective, objectives
from bisched.core.rational import parse_epsilon
from bisched.core.validation import validate_schedule
from bisched.formats.dimacs import parse_dimacs
from bisched.formats.edgelist import parse_edgelist
from bisched.formats.index_json import maxcut_index_to_dict, sat_index_to_dict, serialize_index
from bisched.formats.instance_json import parse_instance, serialize_instance
from bisched.formats.schedule_json import (
    parse_schedule,
    report_to_dict,
    result_to_dict,
    serialize_schedule,
)
from bisched.reductions.gadgets import GadgetKind, verify_gadgets
from bisched.reductions.lift import lift_unit_processing
from bisched.reductions.maxcut import gen_maxcut
from bisched.reductions.sat import gen_sat
from bisched.solvers import build_builtin_registry
from bisched.solvers.base import SolveRequest
from bisched.solvers.loader import load_external_solvers
from bisched.solvers.registry import SolverRegistry

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_PRECONDITION = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bisched",
        description="Расписания двунаправленного движения по пути из однопутных участков",
    )
    parser.add_argument(
        "--portable",
        action="store_true",
        help="Портативный режим: использовать ./data вместо системной директории",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    solve_parser = subparsers.add_parser("solve", help="Решить инстанс выбранным алгоритмом")
    solve_parser.add_argument("instance", type=Path, help="JSON-файл инстанса")
    solve_parser.add_argument("--algo", required=True, help="ID решателя (см. show-config)")
    solve_parser.add_argument(
        "--objective", choices=[o.value for o in Objective], default=Objective.SUM_COMPLETION.value
    )
    solve_parser.add_argument("--epsilon", type=str, help="Точность PTAS, например 1/2")
    solve_parser.add_argument("--out", type=Path, help="Куда записать расписание (JSON)")

    validate_parser = subparsers.add_parser("validate", help="Проверить расписание на инстансе")
    validate_parser.add_argument("instance", type=Path)
    validate_parser.add_argument("--schedule", type=Path, required=True)

    gen_parser = subparsers.add_parser("gen", help="Сгенерировать инстанс")
    gen_sub = gen_parser.add_subparsers(dest="generator", required=True)

    random_parser = gen_sub.add_parser("random", help="Случайный инстанс по профилю")
    random_parser.add_argument("--n", type=int, required=True, help="Число работ")
    random_parser.add_argument("--m", type=int, default=1, help="Число участков")
    random_parser.add_argument("--seed", type=int, default=0)
    random_parser.add_argument("--profile", default=Profile.GENERAL.value)
    random_parser.add_argument("--out", type=Path)

    maxcut_parser = gen_sub.add_parser("maxcut", help="Сведение MaxCut (p=0, τ=1)")
    maxcut_parser.add_argument("graph", type=Path, help="Список рёбер: строки 'u v'")
    maxcut_parser.add_argument("--k", type=int, required=True, help="Целевой размер разреза")
    maxcut_parser.add_argument(
        "--lemma-scale",
        action="store_true",
        help="Единичные кратности y, z: для проверки гаджетов, не для сведения",
    )
    maxcut_parser.add_argument("--out", type=Path)
    maxcut_parser.add_argument("--index", type=Path, help="Куда записать индекс гаджетов")

    sat_parser = gen_sub.add_parser("sat", help="Сведение ≤3-SAT-3 (один участок, p=τ=1)")
    sat_parser.add_argument("formula", type=Path, help="Формула в формате DIMACS CNF")
    sat_parser.add_argument("--tail", action="store_true", help="Добавить хвост для ΣC_j")
    sat_parser.add_argument("--out", type=Path)
    sat_parser.add_argument("--index", type=Path, help="Куда записать индекс работ")

    lift_parser = gen_sub.add_parser("lift", help="Поднять инстанс p=0, τ=1 до p=1, τ=n²m")
    lift_parser.add_argument("instance", type=Path)
    lift_parser.add_argument("--out", type=Path)

    subparsers.add_parser("gadgets", help="Проверить значения ожидания гаджетов MaxCut")

    bench_parser = subparsers.add_parser("bench", help="Сравнить алгоритмы на корпусе инстансов")
    bench_parser.add_argument("--dir", type=Path, required=True, help="Каталог с *.json")
    bench_parser.add_argument("--algos", required=True, help="ID решателей через запятую")
    bench_parser.add_argument("--out", type=Path, required=True, help="CSV с результатами")
    bench_parser.add_argument(
        "--objective", choices=[o.value for o in Objective], default=Objective.SUM_COMPLETION.value
    )
    bench_parser.add_argument("--workers", type=int, help="Число параллельных потоков")

    subparsers.add_parser("show-config", help="Показать текущую конфигурацию")
    return parser


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise AppError(f"Не удалось прочитать файл {path}: {exc.strerror}.") from exc


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        print(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text + "\n", encoding="utf-8")
    print(f"Записано: {out}")


def _print_json(payload: Any) -> None:
    print(json.dumps(payload, ensure_ascii=False, indent=2))


def _cmd_solve(args: argparse.Namespace, config: AppConfig, registry: SolverRegistry) -> int:
    instance = parse_instance(_read(args.instance))
    objective = Objective(args.objective)
    epsilon = parse_epsilon(args.epsilon) if args.epsilon else None
    solver = registry.get(args.algo)
    result = solver.solve(instance, SolveRequest(objective, epsilon, config))
    violations = validate_schedule(instance, result.schedule)
    if violations:
        logger.error("Решатель %s вернул недопустимое расписание: %s", args.algo, violations[:3])
        print(f"Решатель {args.algo} вернул недопустимое расписание ({len(violations)} нарушений).")
        return EXIT_FINDINGS
    report = objectives(instance, result.schedule, check=False)
    if args.out is not None:
        _emit(serialize_schedule(result.schedule), args.out)
        report_path = args.out.with_name(f"{args.out.stem}.report.json")
        payload = result_to_dict(args.algo, result, report)
        _emit(json.dumps(payload, ensure_ascii=False, indent=2), report_path)
    else:
        _print_json(result_to_dict(args.algo, result, report))
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    instance = parse_instance(_read(args.instance))
    schedule = parse_schedule(_read(args.schedule))
    violations = validate_schedule(instance, schedule)
    if violations:
        print(f"Найдено нарушений: {len(violations)}")
        for violation in violations:
            print(
                f"  условие {violation.condition}, участок {violation.segment}, "
                f"работы {list(violation.jobs)}: {violation.detail}"
            )
        return EXIT_FINDINGS
    report = objectives(instance, schedule, check=False)
    print("Расписание допустимо.")
    _print_json(report_to_dict(report, Objective.SUM_COMPLETION))
    return EXIT_OK


def _cmd_gen(args: argparse.Namespace) -> int:
    if args.generator == "random":
        instance = gen_random(args.n, args.m, args.seed, args.profile)
        _emit(serialize_instance(instance), args.out)
        return EXIT_OK
    if args.generator == "maxcut":
        graph = parse_edgelist(_read(args.graph))
        reduction = gen_maxcut(graph, args.k, lemma_scale=args.lemma_scale)
        _emit(serialize_instance(reduction.instance), args.out)
        if args.index is not None:
            _emit(serialize_index(maxcut_index_to_dict(reduction)), args.index)
        return EXIT_OK
    if args.generator == "sat":
        sat = gen_sat(parse_dimacs(_read(args.formula)), tail=args.tail)
        _emit(serialize_instance(sat.instance), args.out)
        if args.index is not None:
            _emit(serialize_index(sat_index_to_dict(sat)), args.index)
        return EXIT_OK
    lifted = lift_unit_processing(parse_instance(_read(args.instance)))
    _emit(serialize_instance(lifted), args.out)
    return EXIT_OK


def _cmd_gadgets() -> int:
    reports = [verify_gadgets(kind) for kind in GadgetKind]
    _print_json(
        [
            {
                "kind": report.kind.value,
                "consistent": report.consistent,
                "inconsistent": report.inconsistent,
                "expected": [report.expected_consistent, report.expected_inconsistent],
                "holds": report.holds,
            }
            for report in reports
        ]
    )
    return EXIT_OK if all(report.holds for report in reports) else EXIT_FINDINGS


def _cmd_bench(args: argparse.Namespace, config: AppConfig, registry: SolverRegistry) -> int:
    if args.workers is not None:
        config.bench.workers = args.workers
    algorithms = [item.strip() for item in args.algos.split(",") if item.strip()]
    corpus = load_corpus(args.dir)
    if not corpus:
        raise AppError(f"В каталоге {args.dir} нет файлов *.json.")
    rows = run_bench(corpus, algorithms, registry, config, Objective(args.objective))
    plot_path = write_bench(rows, args.out)
    print(f"Строк: {len(rows)}. CSV: {args.out}")
    if plot_path is not None:
        print(f"Данные для графика: {plot_path}")
    return EXIT_OK


def _cmd_show_config(config: AppConfig, registry: SolverRegistry) -> int:
    payload = {
        "schema_version": config.schema_version,
        "limits": {
            "oracle_max_jobs": config.limits.oracle_max_jobs,
            "oracle_max_segments": config.limits.oracle_max_segments,
            "dp1_max_types": config.limits.dp1_max_types,
            "dpm_max_types": config.limits.dpm_max_types,
            "dpm_max_segments": config.limits.dpm_max_segments,
            "dpm_max_transit": config.limits.dpm_max_transit,
            "dpm_state_cap": config.limits.dpm_state_cap,
        },
        "ptas": {
            "epsilon": config.ptas.epsilon,
            "block_capacity": config.ptas.block_capacity,
            "safety_net": config.ptas.safety_net,
        },
        "bench": {"epsilons": config.bench.epsilons, "workers": config.bench.workers},
        "solvers": {solver.solver_id: solver.title for solver in registry.all()},
    }
    _print_json(payload)
    return EXIT_OK


def main() -> None:
    parser = _build_parser()
    args = parser.parse_args()

    if args.portable:
        os.environ[PORTABLE_ENV] = "1"

    load_dotenv()
    log_path = configure_logging()

    try:
        config = apply_env_overrides(ConfigStore().load())
        registry = build_builtin_registry()
        load_external_solvers(registry, Path("plugins"))

        if args.command == "solve":
            code = _cmd_solve(args, config, registry)
        elif args.command == "validate":
            code = _cmd_validate(args)
        elif args.command == "gen":
            code = _cmd_gen(args)
        elif args.command == "gadgets":
            code = _cmd_gadgets()
        elif args.command == "bench":
            code = _cmd_bench(args, config, registry)
        else:
            code = _cmd_show_config(config, registry)
    except InfeasibleSchedule as exc:
        print(f"Ошибка: {exc.user_message}")
        sys.exit(EXIT_FINDINGS)
    except AppError as exc:
        print(f"Ошибка: {exc.user_message}")
        print(f"Лог: {log_path}")
        sys.exit(EXIT_PRECONDITION)
    except KeyboardInterrupt:
        print("Остановлено пользователем.")
        sys.exit(130)
    except Exception:
        logger.exception("Непредвиденная ошибка приложения")
        print("Ошибка: произошла непредвиденная ошибка. Подробности в логе.")
        print(f"Лог: {log_path}")
        sys.exit(EXIT_FINDINGS)
    sys.exit(code)


if __name__ == "__main__":
    main()
