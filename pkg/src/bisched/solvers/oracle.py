from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx

from bisched.config.schema import SolverLimits
from bisched.core.errors import InstanceTooLarge, PreconditionViolated, ProfileDomainMismatch
from bisched.core.model import Instance, Job, Schedule
from bisched.core.objectives import Objective, objectives, waiting_offset

logger = logging.getLogger(__name__)

_SOURCE = ("source", 0)


@dataclass(frozen=True, slots=True)
class SequenceProfile:
    """Per segment, the processing order of the jobs routed through it."""

    orders: Mapping[int, tuple[int, ...]]

    @classmethod
    def from_schedule(cls, instance: Instance, schedule: Schedule) -> SequenceProfile:
        orders: dict[int, tuple[int, ...]] = {}
        for segment in instance.segments:
            jobs = instance.jobs_on(segment.index)
            jobs.sort(key=lambda job: (schedule.start(job.id, segment.index), job.id))
            orders[segment.index] = tuple(job.id for job in jobs)
        return cls(orders)


@dataclass(frozen=True, slots=True)
class Infeasible:
    cycle: tuple[tuple[int, int], ...]


@dataclass(frozen=True, slots=True)
class ExactSolution:
    schedule: Schedule
    value: Fraction
    nodes: int


def conflict_lag(instance: Instance, segment: int, first: Job, second: Job) -> Fraction | None:
    """Minimal S(second) - S(first) when `first` goes before `second`; None if unconstrained."""
    if first.direction is second.direction:
        return first.proc
    if instance.compat.compatible(segment, first.id, second.id):
        return None
    return first.proc + instance.transit(segment)


def precedence_graph(instance: Instance, profile: SequenceProfile) -> nx.DiGraph:
    _check_profile(instance, profile)
    graph = nx.DiGraph()
    graph.add_node(_SOURCE)

    def add_arc(u: tuple[object, int], v: tuple[object, int], lag: Fraction) -> None:
        if graph.has_edge(u, v) and graph[u][v]["lag"] >= lag:
            return
        graph.add_edge(u, v, lag=lag)

    for job in instance.jobs:
        add_arc(_SOURCE, (job.id, job.start_seg), job.release)
        for segment in job.route[:-1]:
            nxt = job.next_segment(segment)
            assert nxt is not None
            add_arc((job.id, segment), (job.id, nxt), instance.running_time(job, segment))

    for segment, order in profile.orders.items():
        jobs = [instance.job(job_id) for job_id in order]
        for pos, first in enumerate(jobs):
            for second in jobs[pos + 1 :]:
                lag = conflict_lag(instance, segment, first, second)
                if lag is not None:
                    add_arc((first.id, segment), (second.id, segment), lag)
    return graph


def _check_profile(instance: Instance, profile: SequenceProfile) -> None:
    if set(profile.orders) != {segment.index for segment in instance.segments}:
        raise ProfileDomainMismatch("Профиль должен задавать порядок на каждом участке.")
    for segment, order in profile.orders.items():
        expected = {job.id for job in instance.jobs_on(segment)}
        if len(order) != len(set(order)) or set(order) != expected:
            raise ProfileDomainMismatch(
                f"Порядок на участке {segment} не совпадает с множеством проходящих работ."
            )


def timing_from_profile(instance: Instance, profile: SequenceProfile) -> Schedule | Infeasible:
    graph = precedence_graph(instance, profile)
    try:
        order = list(nx.topological_sort(graph))
    except nx.NetworkXUnfeasible:
        cycle = nx.find_cycle(graph)
        return Infeasible(tuple(edge[0] for edge in cycle))

    earliest: dict[tuple[object, int], Fraction] = {_SOURCE: Fraction(0)}
    for node in order:
        base = earliest.get(node, Fraction(0))
        for succ in graph.successors(node):
            candidate = base + graph[node][succ]["lag"]
            if candidate > earliest.get(succ, Fraction(0)):
                earliest[succ] = candidate
            else:
                earliest.setdefault(succ, Fraction(0))
    starts = {
        (job.id, segment): earliest[(job.id, segment)]
        for job in instance.jobs
        for segment in job.route
    }
    return Schedule(starts)


def _twin_key(instance: Instance, job: Job) -> tuple[object, ...]:
    signature = tuple(
        frozenset(
            other.id
            for other in instance.jobs_on(segment)
            if instance.compat.compatible(segment, job.id, other.id)
        )
        for segment in job.route
    )
    return (job.direction, job.release, job.proc, job.start_seg, job.target_seg, signature)


def check_limits(instance: Instance, limits: SolverLimits) -> None:
    if instance.has_multiplicity():
        raise PreconditionViolated(
            "Точный решатель не поддерживает кратности; разверните инстанс (Instance.expanded)."
        )
    if instance.n > limits.oracle_max_jobs or instance.m > limits.oracle_max_segments:
        raise InstanceTooLarge(
            f"Инстанс слишком велик для точного перебора: n={instance.n}, m={instance.m} "
            f"(лимит n ≤ {limits.oracle_max_jobs}, m ≤ {limits.oracle_max_segments})."
        )


def solve_exact(
    instance: Instance,
    objective: Objective = Objective.SUM_COMPLETION,
    limits: SolverLimits | None = None,
) -> ExactSolution:
    """Branch and bound over active schedules.

    Operations are appended to their segment's order in non-decreasing start time, so every
    active schedule is reachable (up to the order of compatible pairs, which does not affect
    timing) and the starts computed on the way are the longest-path starts of the profile.
    """
    from bisched.solvers.greedy import greedy_baseline

    check_limits(instance, limits or SolverLimits())
    jobs = sorted(instance.jobs, key=lambda job: job.id)
    routes = {job.id: job.route for job in jobs}

    twin_of: dict[int, int] = {}
    last_by_key: dict[tuple[object, ...], int] = {}
    for job in jobs:
        key = _twin_key(instance, job)
        if key in last_by_key:
            twin_of[job.id] = last_by_key[key]
        last_by_key[key] = job.id

    incumbent = greedy_baseline(instance)
    best_value = objectives(instance, incumbent).value(objective)
    best_starts: dict[tuple[int, int], Fraction] | None = None
    best_orders: dict[int, tuple[int, ...]] = {}

    starts: dict[tuple[int, int], Fraction] = {}
    pos = {job.id: 0 for job in jobs}
    on_segment: dict[int, list[tuple[Job, Fraction]]] = {s.index: [] for s in instance.segments}
    nodes = 0
    total_ops = sum(len(r) for r in routes.values())
    offset = waiting_offset(instance)

    def ready_time(job: Job) -> Fraction:
        k = pos[job.id]
        if k == 0:
            return job.release
        prev = routes[job.id][k - 1]
        return starts[(job.id, prev)] + instance.running_time(job, prev)

    def remaining_run(job: Job) -> Fraction:
        return sum(
            (instance.running_time(job, seg) for seg in routes[job.id][pos[job.id] :]),
            Fraction(0),
        )

    def lower_bound(last: Fraction) -> Fraction:
        completions: list[Fraction] = []
        for job in jobs:
            route = routes[job.id]
            if pos[job.id] == len(route):
                target = route[-1]
                completions.append(starts[(job.id, target)] + instance.running_time(job, target))
            else:
                completions.append(max(ready_time(job), last) + remaining_run(job))
        if objective is Objective.MAKESPAN:
            return max(completions, default=Fraction(0))
        total = sum(completions, Fraction(0))
        return total - offset if objective is Objective.SUM_WAITING else total

    def earliest_on(job: Job, segment: int) -> Fraction:
        value = ready_time(job)
        for other, other_start in on_segment[segment]:
            lag = conflict_lag(instance, segment, other, job)
            if lag is not None and other_start + lag > value:
                value = other_start + lag
        return value

    def search(done: int, last: Fraction) -> None:
        nonlocal nodes, best_value, best_starts, best_orders
        nodes += 1
        if done == total_ops:
            value = lower_bound(last)
            if value < best_value:
                best_value = value
                best_starts = dict(starts)
                best_orders = {
                    seg: tuple(job.id for job, _ in placed) for seg, placed in on_segment.items()
                }
            return
        if lower_bound(last) >= best_value:
            return

        candidates: list[tuple[Fraction, int, Job, int]] = []
        for job in jobs:
            k = pos[job.id]
            route = routes[job.id]
            if k == len(route):
                continue
            twin = twin_of.get(job.id)
            if twin is not None and pos[twin] <= k:
                continue
            segment = route[k]
            start = earliest_on(job, segment)
            if start < last:
                continue
            candidates.append((start, job.id, job, segment))
        candidates.sort(key=lambda item: (item[0], item[1]))

        for start, _, job, segment in candidates:
            starts[(job.id, segment)] = start
            on_segment[segment].append((job, start))
            pos[job.id] += 1
            search(done + 1, start)
            pos[job.id] -= 1
            on_segment[segment].pop()
            del starts[(job.id, segment)]

    search(0, Fraction(0))

    if best_starts is None:
        schedule = incumbent
        logger.info("Жадное расписание оказалось оптимальным (узлов: %d)", nodes)
    else:
        # порядок берётся из поиска: сортировка по старту путает работы с p=0,
        # стартующие одновременно с попутной работой
        candidate = Schedule(best_starts)
        timed = timing_from_profile(instance, SequenceProfile(best_orders))
        if isinstance(timed, Infeasible):
            schedule = candidate
        else:
            timed_value = objectives(instance, timed).value(objective)
            schedule = timed if timed_value <= best_value else candidate
    value = objectives(instance, schedule).value(objective)
    logger.info("Точное решение: %s=%s, узлов %d", objective.value, value, nodes)
    return ExactSolution(schedule=schedule, value=value, nodes=nodes)
