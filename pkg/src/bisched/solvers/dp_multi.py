from __future__ import annotations

import heapq
import itertools
import logging
from collections import deque
from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction

from bisched.config.schema import SolverLimits
from bisched.core.errors import InconsistentState, PreconditionViolated, StateCapExceeded
from bisched.core.model import Direction, Instance, Job, Schedule
from bisched.core.objectives import Objective, objectives

logger = logging.getLogger(__name__)


class Mode(StrEnum):
    UNIT_PROC = "A"
    ZERO_PROC = "B"


@dataclass(frozen=True, slots=True, order=True)
class SubsetKey:
    class_id: int
    start_seg: int
    target_seg: int


@dataclass(frozen=True, slots=True)
class SystemState:
    time: Fraction
    # по слотам (ключ, участок): сколько работ ждёт входа на участок
    waiting: tuple[int, ...]
    # по слотам (участок, ключ, прошедшее время 1..d-1): сколько работ едет по участку
    transit: tuple[int, ...]
    completed: tuple[int, ...]


@dataclass(frozen=True, slots=True)
class TransitionCost:
    elapsed: Fraction
    cost: Fraction


# (segment, key index, count)
Move = tuple[tuple[int, int, int], ...]


@dataclass(frozen=True, slots=True)
class DpmSolution:
    schedule: Schedule
    value: Fraction
    states: int


def detect_mode(instance: Instance) -> Mode:
    procs = {job.proc for job in instance.jobs}
    if procs <= {Fraction(1)}:
        return Mode.UNIT_PROC
    if procs <= {Fraction(0)} and all(s.transit == 1 for s in instance.segments):
        return Mode.ZERO_PROC
    raise PreconditionViolated(
        "Многоучастковая динамика требует p_j = 1 (режим A) либо p_j = 0 и τ_i = 1 (режим B)."
    )


def _check_preconditions(instance: Instance, mode: Mode, limits: SolverLimits) -> None:
    if mode is Mode.UNIT_PROC:
        if any(job.proc != 1 for job in instance.jobs):
            raise PreconditionViolated("Режим A требует p_j = 1 у всех работ.")
        for segment in instance.segments:
            if segment.transit.denominator != 1 or segment.transit > limits.dpm_max_transit:
                raise PreconditionViolated(
                    f"Режим A: τ_{segment.index} должно быть целым и ≤ {limits.dpm_max_transit}."
                )
        if instance.has_multiplicity():
            raise PreconditionViolated("Режим A не поддерживает кратности работ.")
    else:
        if any(job.proc != 0 for job in instance.jobs) or any(
            s.transit != 1 for s in instance.segments
        ):
            raise PreconditionViolated("Режим B требует p_j = 0 и τ_i = 1.")
    if instance.m > limits.dpm_max_segments:
        raise PreconditionViolated(
            f"Слишком много участков для динамики: {instance.m} > {limits.dpm_max_segments}."
        )
    if any(job.release.denominator != 1 for job in instance.jobs):
        raise PreconditionViolated("Многоучастковая динамика требует целых release.")


def compatibility_classes(instance: Instance) -> dict[int, int]:
    """Job id -> class id; jobs share a class iff direction and per-segment signatures agree."""
    signatures: dict[int, tuple[object, ...]] = {}
    for job in instance.jobs:
        per_segment = tuple(
            frozenset(
                other.id
                for other in instance.jobs
                if other.direction is not job.direction
                and instance.compat.compatible(seg.index, job.id, other.id)
            )
            for seg in instance.segments
        )
        signatures[job.id] = (job.direction.value, per_segment)
    ordered = sorted(set(signatures.values()), key=repr)
    index = {sig: pos for pos, sig in enumerate(ordered)}
    return {job_id: index[sig] for job_id, sig in signatures.items()}


class MultiSegmentDp:
    def __init__(
        self,
        instance: Instance,
        mode: Mode | None = None,
        objective: Objective = Objective.SUM_COMPLETION,
        limits: SolverLimits | None = None,
    ) -> None:
        self.instance = instance
        self.limits = limits or SolverLimits()
        self.mode = mode or detect_mode(instance)
        self.objective = objective
        _check_preconditions(instance, self.mode, self.limits)
        self.p = 1 if self.mode is Mode.UNIT_PROC else 0

        classes = compatibility_classes(instance)
        self.num_types = len(set(classes.values()))
        if self.num_types > self.limits.dpm_max_types:
            raise PreconditionViolated(
                "Слишком много классов совместимости: "
                f"{self.num_types} > {self.limits.dpm_max_types}."
            )
        key_of: dict[int, SubsetKey] = {
            job.id: SubsetKey(classes[job.id], job.start_seg, job.target_seg)
            for job in instance.jobs
        }
        self.keys: list[SubsetKey] = sorted(set(key_of.values()))
        self._key_index = {key: pos for pos, key in enumerate(self.keys)}
        self.job_key = {job_id: self._key_index[key] for job_id, key in key_of.items()}
        self._sample: list[Job] = []
        for key in self.keys:
            sample = next(job for job in instance.jobs if key_of[job.id] == key)
            self._sample.append(sample)
        self.directions = [job.direction for job in self._sample]
        self.routes = [job.route for job in self._sample]

        self.duration = {
            seg.index: self.p + int(seg.transit) for seg in instance.segments
        }
        self.waiting_slots: dict[tuple[int, int], int] = {}
        for k, route in enumerate(self.routes):
            for seg in route:
                self.waiting_slots[(k, seg)] = len(self.waiting_slots)
        self.transit_slots: dict[tuple[int, int, int], int] = {}
        for seg in instance.segments:
            for k, route in enumerate(self.routes):
                if seg.index in route:
                    for elapsed in range(1, self.duration[seg.index]):
                        self.transit_slots[(seg.index, k, elapsed)] = len(self.transit_slots)

        self._compatible: dict[tuple[int, int, int], bool] = {}
        for seg in instance.segments:
            for a, b in itertools.product(range(len(self.keys)), repeat=2):
                ja, jb = self._sample[a], self._sample[b]
                self._compatible[(seg.index, a, b)] = instance.compatible(seg.index, ja, jb)

        self.releases: dict[Fraction, list[int]] = {}
        for job in instance.jobs:
            units = self.releases.setdefault(job.release, [0] * len(self.keys))
            units[self.job_key[job.id]] += job.multiplicity
        self.release_times = sorted(self.releases)

    # -- state helpers -------------------------------------------------

    def _released_by(self, time: Fraction) -> list[int]:
        totals = [0] * len(self.keys)
        for release in self.release_times:
            if release > time:
                break
            for k, units in enumerate(self.releases[release]):
                totals[k] += units
        return totals

    def initial_state(self) -> SystemState:
        start = self.release_times[0] if self.release_times else Fraction(0)
        waiting = [0] * len(self.waiting_slots)
        self._add_releases(waiting, start)
        return SystemState(
            time=start,
            waiting=tuple(waiting),
            transit=tuple([0] * len(self.transit_slots)),
            completed=tuple([0] * len(self.keys)),
        )

    def _add_releases(self, waiting: list[int], time: Fraction) -> None:
        for k, units in enumerate(self.releases.get(time, [])):
            if units:
                waiting[self.waiting_slots[(k, self.routes[k][0])]] += units

    def check_consistent(self, state: SystemState) -> None:
        released = self._released_by(state.time)
        for k in range(len(self.keys)):
            total = state.completed[k]
            total += sum(state.waiting[self.waiting_slots[(k, seg)]] for seg in self.routes[k])
            total += sum(
                state.transit[slot] for (_, key, _), slot in self.transit_slots.items() if key == k
            )
            if total != released[k] or min(state.waiting + state.transit + state.completed) < 0:
                raise InconsistentState(
                    f"Состояние в момент {state.time} не согласовано для ключа {self.keys[k]}."
                )
        if self.mode is Mode.UNIT_PROC:
            for seg in self.instance.segments:
                for elapsed in range(1, self.duration[seg.index]):
                    for direction in Direction:
                        moving = sum(
                            state.transit[self.transit_slots[(seg.index, k, elapsed)]]
                            for k in range(len(self.keys))
                            if (seg.index, k, elapsed) in self.transit_slots
                            and self.directions[k] is direction
                        )
                        if moving > 1:
                            raise InconsistentState(
                                f"Две попутные работы в одной позиции участка {seg.index}."
                            )

    def is_final(self, state: SystemState) -> bool:
        return (
            not any(state.waiting)
            and not any(state.transit)
            and (not self.release_times or state.time >= self.release_times[-1])
        )

    def _uncompleted(self, state: SystemState) -> int:
        return sum(state.waiting) + sum(state.transit)

    def _segment_options(self, state: SystemState, seg: int) -> list[tuple[tuple[int, int], ...]]:
        per_direction: dict[Direction, list[tuple[tuple[int, int], ...]]] = {}
        for direction in Direction:
            ready = [
                (k, state.waiting[self.waiting_slots[(k, seg)]])
                for k in range(len(self.keys))
                if self.directions[k] is direction
                and (k, seg) in self.waiting_slots
                and state.waiting[self.waiting_slots[(k, seg)]] > 0
            ]
            options: list[tuple[tuple[int, int], ...]] = [()]
            if self.p == 1:
                options.extend(((k, 1),) for k, _ in ready)
            else:
                # при p = 0 очередь ключа уходит целиком: попутные работы не мешают друг другу
                for size in range(1, len(ready) + 1):
                    options.extend(tuple(combo) for combo in itertools.combinations(ready, size))
            per_direction[direction] = options

        moving_keys = {
            k
            for (s, k, _), slot in self.transit_slots.items()
            if s == seg and state.transit[slot] > 0
        }
        result: list[tuple[tuple[int, int], ...]] = []
        for right, left in itertools.product(
            per_direction[Direction.RIGHTBOUND], per_direction[Direction.LEFTBOUND]
        ):
            entering = right + left
            if all(self._admissible(seg, k, entering, moving_keys) for k, _ in entering):
                result.append(entering)
        return result

    def _admissible(
        self, seg: int, k: int, entering: tuple[tuple[int, int], ...], moving: set[int]
    ) -> bool:
        for other in itertools.chain((key for key, _ in entering), moving):
            if self.directions[other] is self.directions[k]:
                continue
            if not self._compatible[(seg, k, other)]:
                return False
        return True

    def successors(self, state: SystemState) -> list[tuple[SystemState, TransitionCost, Move]]:
        self.check_consistent(state)
        result: list[tuple[SystemState, TransitionCost, Move]] = []
        per_segment = [
            [(seg.index, option) for option in self._segment_options(state, seg.index)]
            for seg in self.instance.segments
        ]
        in_transit = any(state.transit)
        uncompleted = self._uncompleted(state)
        makespan = self.objective is Objective.MAKESPAN
        for combo in itertools.product(*per_segment):
            move: Move = tuple(
                (seg, k, count) for seg, option in combo for k, count in option
            )
            if not move and not in_transit:
                continue
            nxt = self._advance(state, move)
            step_cost = Fraction(1) if makespan else Fraction(uncompleted)
            result.append((nxt, TransitionCost(Fraction(1), step_cost), move))

        if not in_transit:
            later = [r for r in self.release_times if r > state.time]
            if later:
                target = later[0]
                waiting = list(state.waiting)
                self._add_releases(waiting, target)
                elapsed = target - state.time
                cost = elapsed if makespan else elapsed * uncompleted
                jumped = SystemState(target, tuple(waiting), state.transit, state.completed)
                result.append((jumped, TransitionCost(elapsed, cost), ()))
        return result

    def _advance(self, state: SystemState, move: Move) -> SystemState:
        waiting = list(state.waiting)
        transit = [0] * len(self.transit_slots)
        completed = list(state.completed)

        def arrive(k: int, seg: int, count: int) -> None:
            job_route = self.routes[k]
            idx = job_route.index(seg)
            if idx == len(job_route) - 1:
                completed[k] += count
            else:
                waiting[self.waiting_slots[(k, job_route[idx + 1])]] += count

        for (seg, k, elapsed), slot in self.transit_slots.items():
            count = state.transit[slot]
            if not count:
                continue
            if elapsed + 1 < self.duration[seg]:
                transit[self.transit_slots[(seg, k, elapsed + 1)]] += count
            else:
                arrive(k, seg, count)
        for seg, k, count in move:
            waiting[self.waiting_slots[(k, seg)]] -= count
            if self.duration[seg] > 1:
                transit[self.transit_slots[(seg, k, 1)]] += count
            else:
                arrive(k, seg, count)
        time = state.time + 1
        self._add_releases(waiting, time)
        return SystemState(time, tuple(waiting), tuple(transit), tuple(completed))

    # -- search ----------------------------------------------------------

    def solve(self) -> tuple[Schedule, int]:
        cap = self.limits.dpm_state_cap
        start = self.initial_state()
        best: dict[SystemState, tuple[Fraction, SystemState | None, Move]] = {
            start: (Fraction(0), None, ())
        }
        layers: dict[Fraction, list[SystemState]] = {start.time: [start]}
        heap = [start.time]
        best_final: tuple[Fraction, SystemState] | None = None

        while heap:
            time = heapq.heappop(heap)
            for state in layers.pop(time):
                cost = best[state][0]
                if best_final is not None and cost >= best_final[0]:
                    continue
                if self.is_final(state):
                    best_final = (cost, state)
                    continue
                for nxt, transition, move in self.successors(state):
                    total = cost + transition.cost
                    known = best.get(nxt)
                    if known is not None and known[0] <= total:
                        continue
                    if known is None:
                        if nxt.time not in layers:
                            layers[nxt.time] = []
                            heapq.heappush(heap, nxt.time)
                        layers[nxt.time].append(nxt)
                    best[nxt] = (total, state, move)
                    if len(best) > cap:
                        raise StateCapExceeded(cap, time)

        if best_final is None:
            raise InconsistentState("Граф состояний не содержит конечного состояния.")
        path: list[tuple[Fraction, Move]] = []
        node: SystemState | None = best_final[1]
        while node is not None:
            _, parent, move = best[node]
            if parent is not None and move:
                path.append((parent.time, move))
            node = parent
        path.reverse()
        return self._replay(path), len(best)

    def _replay(self, path: list[tuple[Fraction, Move]]) -> Schedule:
        """Turn key-level moves into concrete starts, FIFO within a key."""
        queues: dict[tuple[int, int], deque[int]] = {slot: deque() for slot in self.waiting_slots}
        events: list[tuple[Fraction, int, int, int]] = []  # (time, order, key, job) для прибытий
        for job in sorted(self.instance.jobs, key=lambda j: (j.release, j.id)):
            events.append((job.release, 0, self.job_key[job.id], job.id))
        heapq.heapify(events)
        seq = itertools.count(1)
        position: dict[int, int] = {job.id: 0 for job in self.instance.jobs}
        units = {job.id: job.multiplicity for job in self.instance.jobs}
        starts: dict[tuple[int, int], Fraction] = {}

        def flush(until: Fraction) -> None:
            while events and events[0][0] <= until:
                _, _, k, job_id = heapq.heappop(events)
                queues[(k, self.routes[k][position[job_id]])].append(job_id)

        for time, move in path:
            flush(time)
            for seg, k, count in move:
                queue = queues[(k, seg)]
                remaining = count
                while remaining > 0:
                    job_id = queue.popleft()
                    remaining -= units[job_id]
                    starts[(job_id, seg)] = time
                    position[job_id] += 1
                    if position[job_id] < len(self.routes[k]):
                        heapq.heappush(
                            events, (time + self.duration[seg], next(seq), k, job_id)
                        )
                if remaining != 0:
                    raise InconsistentState("Колонна копий разделилась при восстановлении.")
        return Schedule(starts)


def state_successors(
    instance: Instance, state: SystemState, mode: Mode | None = None
) -> list[tuple[SystemState, TransitionCost]]:
    dp = MultiSegmentDp(instance, mode)
    return [(nxt, cost) for nxt, cost, _ in dp.successors(state)]


def solve_dpm(
    instance: Instance,
    mode: Mode | None = None,
    objective: Objective = Objective.SUM_COMPLETION,
    limits: SolverLimits | None = None,
) -> DpmSolution:
    dp = MultiSegmentDp(instance, mode, objective, limits)
    schedule, states = dp.solve()
    value = objectives(instance, schedule).value(objective)
    logger.info(
        "DP(m участков, режим %s): ключей %d, состояний %d, %s=%s",
        dp.mode.value,
        len(dp.keys),
        states,
        objective.value,
        value,
    )
    return DpmSolution(schedule=schedule, value=value, states=states)
