"""Gadget geometry of the MaxCut construction (p = 0, τ = 1) and their isolated verification.

Time slot t of a vertex segment is [13t, 13t + 13). A vertex gadget in the leftbound state
serves leftbound traffic at even offsets and rightbound traffic at odd offsets; the rightbound
state is the reverse. Blocking jobs carry multiplicity x and are always started at release.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Mapping, Set
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from functools import cache

from bisched.core.errors import InconsistentState
from bisched.core.model import CompatibilityGraph, Direction, Instance, Job, Segment

logger = logging.getLogger(__name__)

SLOT = 13
VERTEX_RELEASES = 12
BLOCK_WIDTH = 9
_INF = 10**12


class GadgetKind(StrEnum):
    VERTEX = "vertex"
    COPY = "copy"
    TRANSPOSITION = "transposition"
    EDGE = "edge"


@dataclass(frozen=True, slots=True)
class GadgetRecord:
    kind: GadgetKind
    # для вершинных гаджетов: номер вершинного участка; иначе номер блока
    row: int
    slot: int
    vertices: tuple[int, ...]
    first_segment: int
    last_segment: int
    window: tuple[int, int]
    jobs: tuple[int, ...]
    blockers: tuple[int, ...] = ()


def served_direction(state: Direction, offset: int) -> Direction:
    """Direction a vertex gadget in `state` lets onto its segment at a slot offset."""
    return state if offset % 2 == 0 else state.opposite


def vertex_start(state: Direction, job: Job, slot: int) -> int:
    offset = int(job.release) - SLOT * slot
    return int(job.release) + (0 if served_direction(state, offset) is job.direction else 1)


@dataclass(slots=True)
class GadgetBuilder:
    """Accumulates jobs for gadgets placed on a path of segments."""

    jobs: list[Job] = field(default_factory=list)
    records: list[GadgetRecord] = field(default_factory=list)

    def _job(
        self,
        direction: Direction,
        release: int,
        start: int,
        target: int,
        multiplicity: int,
    ) -> int:
        job_id = len(self.jobs) + 1
        self.jobs.append(
            Job(
                id=job_id,
                direction=direction,
                release=Fraction(release),
                proc=Fraction(0),
                start_seg=start,
                target_seg=target,
                multiplicity=multiplicity,
            )
        )
        return job_id

    def _blocker(self, against: Direction, segment: int, time: int, x: int) -> int:
        return self._job(against.opposite, time, segment, segment, x)

    def vertex(self, row: int, segment: int, slot: int, vertex: int, y: int) -> GadgetRecord:
        base = SLOT * slot
        ids = [
            self._job(direction, base + k, segment, segment, y)
            for k in range(VERTEX_RELEASES)
            for direction in (Direction.LEFTBOUND, Direction.RIGHTBOUND)
        ]
        window = (base, base + SLOT)
        record = GadgetRecord(
            GadgetKind.VERTEX, row, slot, (vertex,), segment, segment, window, tuple(ids)
        )
        self.records.append(record)
        return record

    def copy(self, row: int, a: int, slot: int, vertex: int, z: int, x: int) -> GadgetRecord:
        base = SLOT * slot
        b = a + BLOCK_WIDTH
        ids = [self._job(Direction.RIGHTBOUND, base + k, a, b, z) for k in (0, 1)]
        blockers = [
            self._blocker(Direction.RIGHTBOUND, segment, base + 3, x)
            for segment in (a + 1, a + 2, a + 3)
        ]
        record = GadgetRecord(
            GadgetKind.COPY, row, slot, (vertex,), a, b, (base, base + SLOT),
            tuple(ids), tuple(blockers),
        )
        self.records.append(record)
        return record

    def transposition(
        self, row: int, a: int, slot: int, vertices: tuple[int, int], z: int, x: int
    ) -> GadgetRecord:
        base = SLOT * slot
        b = a + BLOCK_WIDTH
        ids = [self._job(Direction.RIGHTBOUND, base + k, a, b, z) for k in (6, 7)]
        ids += [self._job(Direction.LEFTBOUND, base + k, b, a, z) for k in (6, 7)]
        plan: list[tuple[Direction, int, int]] = [
            (Direction.RIGHTBOUND, a + 1, 9),
            (Direction.RIGHTBOUND, a + 1, 10),
            (Direction.LEFTBOUND, a + 1, 14),
            (Direction.LEFTBOUND, a + 1, 15),
            (Direction.RIGHTBOUND, a + 2, 9),
            (Direction.LEFTBOUND, a + 2, 15),
            # зеркально у правого конца
            (Direction.LEFTBOUND, b - 1, 9),
            (Direction.LEFTBOUND, b - 1, 10),
            (Direction.RIGHTBOUND, b - 1, 14),
            (Direction.RIGHTBOUND, b - 1, 15),
            (Direction.LEFTBOUND, b - 2, 9),
            (Direction.RIGHTBOUND, b - 2, 15),
        ]
        blockers = [self._blocker(against, seg, base + k, x) for against, seg, k in plan]
        record = GadgetRecord(
            GadgetKind.TRANSPOSITION, row, slot, vertices, a, b, (base, base + 2 * SLOT),
            tuple(ids), tuple(blockers),
        )
        self.records.append(record)
        return record

    def edge(self, row: int, a: int, vertices: tuple[int, int], x: int) -> GadgetRecord:
        b = a + BLOCK_WIDTH
        ids = [self._job(Direction.RIGHTBOUND, k, a, b, 1) for k in (7, 8)]
        blockers = [
            self._blocker(Direction.RIGHTBOUND, segment, 15, x) for segment in (a + 6, a + 7, a + 8)
        ]
        record = GadgetRecord(
            GadgetKind.EDGE, row, 0, vertices, a, b, (0, 2 * SLOT), tuple(ids), tuple(blockers)
        )
        self.records.append(record)
        return record

    def instance(self, segments: int) -> Instance:
        return Instance(
            tuple(Segment(index, Fraction(1)) for index in range(1, segments + 1)),
            tuple(self.jobs),
            CompatibilityGraph(),
        )


ClosedSlots = Mapping[Direction, Set[tuple[int, int]]]


def closed_slots(
    instance: Instance, pinned: Mapping[int, int]
) -> dict[Direction, frozenset[tuple[int, int]]]:
    """Entry slots (segment, time) closed to each direction by the pinned jobs."""
    closed: dict[Direction, set[tuple[int, int]]] = {d: set() for d in Direction}
    for job_id, start in pinned.items():
        job = instance.job(job_id)
        for segment in job.route:
            closed[job.direction.opposite].add((segment, start))
    return {d: frozenset(slots) for d, slots in closed.items()}


def traverse(job: Job, closed: ClosedSlots) -> dict[int, int]:
    """Earliest trajectory through closed slots: wait while the entry is closed, then go."""
    blocked = closed[job.direction]
    starts: dict[int, int] = {}
    time = int(job.release)
    for segment in job.route:
        while (segment, time) in blocked:
            time += 1
        starts[segment] = time
        time += 1
    return starts


def min_free_waiting(free: list[Job], closed: ClosedSlots) -> int:
    """Minimum multiplicity-weighted waiting of the free jobs among the closed slots.

    Jobs move whenever their entry is open; only when opposite jobs want the same segment at
    the same time does the search branch on which direction goes first.
    """
    routes = [job.route for job in free]
    weights = [job.multiplicity for job in free]
    directions = [job.direction for job in free]
    horizon = max((int(job.release) for job in free), default=0) + 40 * (1 + len(free))

    @cache
    def best(progress: tuple[tuple[int, int], ...]) -> int:
        active = [i for i, (pos, _) in enumerate(progress) if pos < len(routes[i])]
        if not active:
            return 0
        now = min(progress[i][1] for i in active)
        if now > horizon:
            raise InconsistentState("Траектории синхронизирующих работ не сходятся.")
        movers = [i for i in active if progress[i][1] == now]
        wanting: dict[int, list[int]] = {}
        forced_cost = 0
        forced: list[int] = []
        for i in movers:
            segment = routes[i][progress[i][0]]
            if (segment, now) in closed[directions[i]]:
                forced.append(i)
                forced_cost += weights[i]
            else:
                wanting.setdefault(segment, []).append(i)

        choices: list[list[tuple[list[int], list[int]]]] = []
        for members in wanting.values():
            dirs = {directions[i] for i in members}
            if len(dirs) == 1:
                choices.append([(members, [])])
                continue
            options = []
            for winner in Direction:
                go = [i for i in members if directions[i] is winner]
                stay = [i for i in members if directions[i] is not winner]
                options.append((go, stay))
            choices.append(options)

        result: int | None = None
        for combo in itertools.product(*choices):
            nxt = list(progress)
            cost = forced_cost
            for i in forced:
                nxt[i] = (progress[i][0], now + 1)
            for go, stay in combo:
                for i in go:
                    nxt[i] = (progress[i][0] + 1, now + 1)
                for i in stay:
                    nxt[i] = (progress[i][0], now + 1)
                    cost += weights[i]
            total = cost + best(tuple(nxt))
            if result is None or total < result:
                result = total
        assert result is not None
        return result

    return best(tuple((0, int(job.release)) for job in free))


@dataclass(frozen=True, slots=True)
class LemmaReport:
    kind: GadgetKind
    consistent: int
    inconsistent: int
    expected_consistent: int
    expected_inconsistent: int

    @property
    def holds(self) -> bool:
        return (
            self.consistent == self.expected_consistent
            and self.inconsistent >= self.expected_inconsistent
        )


def _vertex_bounds(y: int) -> tuple[int, int]:
    """(worst consistent optimum, best inconsistent optimum) for one vertex gadget."""

    @cache
    def walk(u: int, left: int, right: int, as_left: bool, as_right: bool) -> tuple[int, ...]:
        if u < VERTEX_RELEASES:
            left += y
            right += y
        if left == 0 and right == 0:
            if as_left:
                return (0, _INF, _INF)
            return (_INF, 0, _INF) if as_right else (_INF, _INF, 0)
        outcome = [_INF, _INF, _INF]
        for direction in Direction:
            if (left if direction is Direction.LEFTBOUND else right) == 0:
                continue
            pending_left = 0 if direction is Direction.LEFTBOUND else left
            pending_right = 0 if direction is Direction.RIGHTBOUND else right
            keeps_left = as_left and served_direction(Direction.LEFTBOUND, u) is direction
            keeps_right = as_right and served_direction(Direction.RIGHTBOUND, u) is direction
            cost = pending_left + pending_right
            rest = walk(u + 1, pending_left, pending_right, keeps_left, keeps_right)
            for pos in range(3):
                outcome[pos] = min(outcome[pos], cost + rest[pos])
        return tuple(outcome)

    # позиции: левое состояние, правое состояние, несогласованные расписания
    left_state, right_state, inconsistent = walk(0, 0, 0, True, True)
    return max(left_state, right_state), inconsistent


def _pinned_vertex_starts(
    builder: GadgetBuilder, states: Mapping[tuple[int, int], Direction]
) -> dict[int, int]:
    instance = builder.instance(BLOCK_WIDTH + 1)
    pinned: dict[int, int] = {}
    for record in builder.records:
        if record.kind is GadgetKind.VERTEX:
            state = states[(record.first_segment, record.slot)]
            for job_id in record.jobs:
                pinned[job_id] = vertex_start(state, instance.job(job_id), record.slot)
        else:
            for job_id in record.blockers:
                pinned[job_id] = int(instance.job(job_id).release)
    return pinned


def _measure(
    build: GadgetBuilder, record: GadgetRecord, states: Mapping[tuple[int, int], Direction]
) -> int:
    instance = build.instance(BLOCK_WIDTH + 1)
    pinned = _pinned_vertex_starts(build, states)
    closed = closed_slots(instance, pinned)
    free = [instance.job(job_id) for job_id in record.jobs]
    return min_free_waiting(free, closed)


def isolated_gadget(kind: GadgetKind, z: int = 1, x: int = 1) -> tuple[GadgetBuilder, GadgetRecord]:
    """Gadget of `kind` on segments 1..10 with the vertex gadgets it links (y = 1)."""
    builder = GadgetBuilder()
    a, b = 1, 1 + BLOCK_WIDTH
    if kind is GadgetKind.COPY:
        builder.vertex(0, a, 0, 0, 1)
        builder.vertex(1, b, 0, 0, 1)
        return builder, builder.copy(0, a, 0, 0, z, x)
    if kind is GadgetKind.TRANSPOSITION:
        for segment, row in ((a, 0), (b, 1)):
            for slot in (0, 1):
                builder.vertex(row, segment, slot, slot, 1)
        return builder, builder.transposition(0, a, 0, (0, 1), z, x)
    if kind is GadgetKind.EDGE:
        builder.vertex(0, a, 0, 0, 1)
        builder.vertex(1, b, 1, 1, 1)
        return builder, builder.edge(0, a, (0, 1), x)
    raise ValueError(f"изолированный гаджет не определён для {kind}")


def _links(kind: GadgetKind) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    a, b = 1, 1 + BLOCK_WIDTH
    if kind is GadgetKind.COPY:
        return [((a, 0), (b, 0))]
    if kind is GadgetKind.TRANSPOSITION:
        return [((a, 0), (b, 1)), ((b, 0), (a, 1))]
    return [((a, 0), (b, 1))]


def verify_gadgets(kind: GadgetKind, y: int = 1, z: int = 1) -> LemmaReport:
    """Measure one gadget's waiting over every pinned state assignment of its vertex gadgets."""
    if kind is GadgetKind.VERTEX:
        consistent, inconsistent = _vertex_bounds(y)
        report = LemmaReport(kind, consistent, inconsistent, 12 * y, 13 * y)
        logger.info("Гаджет %s: %s / %s", kind.value, consistent, inconsistent)
        return report

    builder, record = isolated_gadget(kind, z=z)
    links = _links(kind)
    ends = sorted({end for link in links for end in link})
    good: list[int] = []
    bad: list[int] = []
    for choice in itertools.product(list(Direction), repeat=len(ends)):
        states = dict(zip(ends, choice))
        same = all(states[u] is states[v] for u, v in links)
        # ребро хорошо, когда концы в разных состояниях
        is_good = not same if kind is GadgetKind.EDGE else same
        value = _measure(builder, record, states)
        (good if is_good else bad).append(value)

    expected = {
        GadgetKind.COPY: (3 * z, 5 * z),
        GadgetKind.TRANSPOSITION: (10 * z, 12 * z),
        GadgetKind.EDGE: (3, 5),
    }[kind]
    report = LemmaReport(kind, max(good), min(bad), expected[0], expected[1])
    logger.info("Гаджет %s: %s / %s (ожидалось %s)", kind.value, max(good), min(bad), expected)
    return report
