from __future__ import annotations

import bisect
import logging
from dataclasses import dataclass
from fractions import Fraction

from bisched.config.schema import SolverLimits
from bisched.core.errors import MultiSegment, PreconditionViolated
from bisched.core.model import Direction, Instance, Schedule
from bisched.core.objectives import Objective, objectives

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class TypeClass:
    class_id: int
    direction: Direction
    # противоположные работы, совместимые с членами класса на участке 1
    signature: frozenset[int]
    # по невозрастанию release: последний элемент планируется первым
    members: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True, slots=True)
class DpStateKey:
    counts: tuple[int, ...]
    bounds: tuple[Fraction, ...]
    first_class: int


@dataclass(frozen=True, slots=True)
class DpSolution:
    schedule: Schedule
    value: Fraction
    states: int


def partition_types(instance: Instance) -> list[TypeClass]:
    if instance.m != 1:
        raise MultiSegment(instance.m)
    groups: dict[tuple[frozenset[int], Direction], list[int]] = {}
    for job in instance.jobs:
        signature = frozenset(
            other.id
            for other in instance.jobs
            if other.direction is not job.direction
            and instance.compat.compatible(1, job.id, other.id)
        )
        groups.setdefault((signature, job.direction), []).append(job.id)

    ordered = sorted(
        groups.items(),
        key=lambda item: (tuple(sorted(item[0][0])), item[0][1].value, min(item[1])),
    )
    classes: list[TypeClass] = []
    for class_id, ((signature, direction), member_ids) in enumerate(ordered):
        members = sorted(
            member_ids, key=lambda job_id: (instance.job(job_id).release, job_id), reverse=True
        )
        classes.append(TypeClass(class_id, direction, signature, tuple(members)))
    return classes


def _common_proc(instance: Instance) -> Fraction:
    procs = {job.proc for job in instance.jobs}
    if len(procs) > 1:
        raise PreconditionViolated(
            "Динамика для одного участка требует одинаковых p_j у всех работ."
        )
    return next(iter(procs), Fraction(0))


def relevant_times(instance: Instance) -> list[Fraction]:
    if instance.m != 1:
        raise MultiSegment(instance.m)
    p = _common_proc(instance)
    tau = instance.transit(1)
    n = instance.n
    times = {
        job.release + k * tau + ell * p
        for job in instance.jobs
        for k in range(n + 1)
        for ell in range(n + 1)
    }
    return sorted(times)


def theta(
    class_c1: TypeClass,
    t1: Fraction,
    class_c2: TypeClass,
    t2: Fraction,
    instance: Instance,
) -> Fraction:
    """Earliest start >= t1 for a class-c1 job once a class-c2 job has started at t2.

    `t2` is the effective start, i.e. already max{bound, release} of the placed job.
    """
    p = _common_proc(instance)
    if class_c1.direction is class_c2.direction:
        return max(t1, t2 + p)
    if class_c2.members and class_c2.members[0] in class_c1.signature:
        return t1
    return max(t1, t2 + p + instance.transit(1))


class SingleSegmentDp:
    """Suffix-first table T[i_1, t_1, ..., i_k, t_k; c] with sparse memoization.

    counts[c] is the number of class-c jobs still to be placed (those with the largest releases);
    the next class-c job is members[counts[c] - 1].
    """

    def __init__(self, instance: Instance, objective: Objective = Objective.SUM_COMPLETION) -> None:
        self._instance = instance
        self._objective = objective
        self.classes = partition_types(instance)
        self._p = _common_proc(instance)
        self._tau = instance.transit(1)
        self._times = relevant_times(instance)
        self.memo: dict[DpStateKey, Fraction] = {}
        self._choice: dict[DpStateKey, int | None] = {}

    def _snap(self, value: Fraction) -> Fraction:
        idx = bisect.bisect_left(self._times, value)
        return self._times[idx] if idx < len(self._times) else value

    def initial_keys(self) -> list[DpStateKey]:
        counts = tuple(cls.size for cls in self.classes)
        bounds = tuple(Fraction(0) for _ in self.classes)
        return [DpStateKey(counts, bounds, c) for c, n_c in enumerate(counts) if n_c > 0]

    def _place(self, key: DpStateKey) -> tuple[Fraction, DpStateKey | None, Fraction]:
        """Start of the first job, the residual state (first_class unset) and its completion."""
        c = key.first_class
        cls = self.classes[c]
        job = self._instance.job(cls.members[key.counts[c] - 1])
        start = max(key.bounds[c], job.release)
        completion = start + self._p + self._tau
        counts = tuple(n - 1 if d == c else n for d, n in enumerate(key.counts))
        if not any(counts):
            return start, None, completion
        bounds = tuple(
            (
                self._snap(theta(other, key.bounds[d], cls, start, self._instance))
                if counts[d]
                else Fraction(0)
            )
            for d, other in enumerate(self.classes)
        )
        return start, DpStateKey(counts, bounds, -1), completion

    def entry(self, key: DpStateKey) -> Fraction:
        cached = self.memo.get(key)
        if cached is not None:
            return cached
        _, residual, completion = self._place(key)
        best_next: int | None = None
        if residual is None:
            value = completion
        else:
            rest: Fraction | None = None
            for d, n_d in enumerate(residual.counts):
                if n_d == 0:
                    continue
                candidate = self.entry(DpStateKey(residual.counts, residual.bounds, d))
                if rest is None or candidate < rest:
                    rest, best_next = candidate, d
            assert rest is not None
            if self._objective is Objective.MAKESPAN:
                value = max(completion, rest)
            else:
                value = completion + rest
        self.memo[key] = value
        self._choice[key] = best_next
        return value

    def solve(self) -> tuple[Schedule, Fraction]:
        keys = self.initial_keys()
        if not keys:
            return Schedule({}), Fraction(0)
        best_key = min(keys, key=lambda k: (self.entry(k), k.first_class))
        starts: dict[tuple[int, int], Fraction] = {}
        key: DpStateKey | None = best_key
        while key is not None:
            start, residual, _ = self._place(key)
            cls = self.classes[key.first_class]
            starts[(cls.members[key.counts[key.first_class] - 1], 1)] = start
            nxt = self._choice[key]
            key = None if residual is None or nxt is None else DpStateKey(
                residual.counts, residual.bounds, nxt
            )
        return Schedule(starts), self.entry(best_key)


def solve_dp1(
    instance: Instance,
    objective: Objective = Objective.SUM_COMPLETION,
    limits: SolverLimits | None = None,
) -> DpSolution:
    limits = limits or SolverLimits()
    if instance.m != 1:
        raise MultiSegment(instance.m)
    if instance.has_multiplicity():
        raise PreconditionViolated("Динамика для одного участка не поддерживает кратности работ.")
    dp = SingleSegmentDp(instance, objective)
    if len(dp.classes) > limits.dp1_max_types:
        raise PreconditionViolated(
            f"Слишком много классов совместимости: {len(dp.classes)} > {limits.dp1_max_types}."
        )
    schedule, _ = dp.solve()
    value = objectives(instance, schedule).value(objective)
    logger.info(
        "DP(1 участок): κ=%d, %s=%s, состояний %d",
        len(dp.classes),
        objective.value,
        value,
        len(dp.memo),
    )
    return DpSolution(schedule=schedule, value=value, states=len(dp.memo))
