from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field, replace
from enum import StrEnum
from fractions import Fraction

from bisched.core.errors import MissingStartTime, UnknownJob, ValidationError


class Direction(StrEnum):
    RIGHTBOUND = "R"
    LEFTBOUND = "L"

    @property
    def opposite(self) -> Direction:
        return Direction.LEFTBOUND if self is Direction.RIGHTBOUND else Direction.RIGHTBOUND


@dataclass(frozen=True, slots=True)
class Segment:
    index: int
    transit: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "transit", Fraction(self.transit))


@dataclass(frozen=True, slots=True)
class Job:
    id: int
    direction: Direction
    release: Fraction
    proc: Fraction
    start_seg: int
    target_seg: int
    # копии движутся одной колонной, допустимо только при proc == 0
    multiplicity: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "release", Fraction(self.release))
        object.__setattr__(self, "proc", Fraction(self.proc))

    @property
    def route(self) -> tuple[int, ...]:
        """Segments in travel order."""
        if self.direction is Direction.RIGHTBOUND:
            return tuple(range(self.start_seg, self.target_seg + 1))
        return tuple(range(self.start_seg, self.target_seg - 1, -1))

    def next_segment(self, segment: int) -> int | None:
        if segment == self.target_seg:
            return None
        return segment + 1 if self.direction is Direction.RIGHTBOUND else segment - 1

    def previous_segment(self, segment: int) -> int | None:
        if segment == self.start_seg:
            return None
        return segment - 1 if self.direction is Direction.RIGHTBOUND else segment + 1


@dataclass(frozen=True, slots=True)
class CompatibilityGraph:
    """Per segment, the set of (rightbound id, leftbound id) pairs allowed to cross concurrently."""

    edges: Mapping[int, frozenset[tuple[int, int]]] = field(default_factory=dict)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int, int]]) -> CompatibilityGraph:
        """Build from (segment, right id, left id) triples."""
        grouped: dict[int, set[tuple[int, int]]] = {}
        for segment, right, left in pairs:
            grouped.setdefault(segment, set()).add((right, left))
        return cls({seg: frozenset(items) for seg, items in grouped.items()})

    def compatible(self, segment: int, a: int, b: int) -> bool:
        pairs = self.edges.get(segment)
        if not pairs:
            return False
        return (a, b) in pairs or (b, a) in pairs

    def pairs(self, segment: int) -> frozenset[tuple[int, int]]:
        return self.edges.get(segment, frozenset())

    def triples(self) -> Iterator[tuple[int, int, int]]:
        for segment in sorted(self.edges):
            for right, left in sorted(self.edges[segment]):
                yield segment, right, left

    def size(self) -> int:
        return sum(len(p) for p in self.edges.values())


@dataclass(frozen=True, slots=True)
class Instance:
    segments: tuple[Segment, ...]
    jobs: tuple[Job, ...]
    compat: CompatibilityGraph = field(default_factory=CompatibilityGraph)
    _by_id: dict[int, Job] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "segments", tuple(self.segments))
        object.__setattr__(self, "jobs", tuple(self.jobs))
        object.__setattr__(self, "_by_id", {job.id: job for job in self.jobs})
        problems = structural_problems(self)
        if problems:
            raise ValidationError(problems)

    @property
    def m(self) -> int:
        return len(self.segments)

    @property
    def n(self) -> int:
        return len(self.jobs)

    def job(self, job_id: int) -> Job:
        job = self._by_id.get(job_id)
        if job is None:
            raise UnknownJob(job_id)
        return job

    def has_job(self, job_id: int) -> bool:
        return job_id in self._by_id

    def transit(self, segment: int) -> Fraction:
        return self.segments[segment - 1].transit

    def running_time(self, job: Job, segment: int) -> Fraction:
        return job.proc + self.transit(segment)

    def unhindered_completion(self, job: Job) -> Fraction:
        return job.release + sum((self.running_time(job, i) for i in job.route), Fraction(0))

    def compatible(self, segment: int, a: Job, b: Job) -> bool:
        if a.direction is b.direction:
            return False
        return self.compat.compatible(segment, a.id, b.id)

    def jobs_on(self, segment: int) -> list[Job]:
        return [job for job in self.jobs if segment in job.route]

    def domain(self) -> set[tuple[int, int]]:
        return {(job.id, seg) for job in self.jobs for seg in job.route}

    def has_multiplicity(self) -> bool:
        return any(job.multiplicity > 1 for job in self.jobs)

    def expanded(self) -> Instance:
        """Materialize multiplicities: every copy becomes its own job with a fresh id."""
        if not self.has_multiplicity():
            return self
        next_id = max(job.id for job in self.jobs) + 1
        copies: dict[int, list[int]] = {}
        jobs: list[Job] = []
        for job in self.jobs:
            ids = [job.id]
            for _ in range(job.multiplicity - 1):
                ids.append(next_id)
                next_id += 1
            copies[job.id] = ids
            jobs.extend(replace(job, id=copy_id, multiplicity=1) for copy_id in ids)
        triples = [
            (segment, right_copy, left_copy)
            for segment, right, left in self.compat.triples()
            for right_copy in copies[right]
            for left_copy in copies[left]
        ]
        return Instance(self.segments, tuple(jobs), CompatibilityGraph.from_pairs(triples))


def structural_problems(instance: Instance) -> list[str]:
    problems: list[str] = []
    for position, segment in enumerate(instance.segments, start=1):
        if segment.index != position:
            problems.append(
                f"участки должны идти подряд с 1: на позиции {position} индекс {segment.index}"
            )
        if segment.transit < 0:
            problems.append(f"участок {segment.index}: отрицательное время проезда")
    m = len(instance.segments)
    seen: set[int] = set()
    for job in instance.jobs:
        if job.id in seen:
            problems.append(f"повторяющийся id работы {job.id}")
        seen.add(job.id)
        if job.release < 0 or job.proc < 0:
            problems.append(f"работа {job.id}: отрицательные release/proc")
        if not (1 <= job.start_seg <= m and 1 <= job.target_seg <= m):
            problems.append(f"работа {job.id}: маршрут вне диапазона 1..{m}")
        if job.direction is Direction.RIGHTBOUND and job.start_seg > job.target_seg:
            problems.append(f"работа {job.id}: правонаправленная, но start > target")
        if job.direction is Direction.LEFTBOUND and job.start_seg < job.target_seg:
            problems.append(f"работа {job.id}: левонаправленная, но start < target")
        if job.multiplicity < 1:
            problems.append(f"работа {job.id}: кратность должна быть ≥ 1")
        elif job.multiplicity > 1 and job.proc != 0:
            problems.append(f"работа {job.id}: кратность > 1 допустима только при proc = 0")
    by_id = {job.id: job for job in instance.jobs}
    for segment, right, left in instance.compat.triples():
        if not 1 <= segment <= m:
            problems.append(f"совместимость: участок {segment} вне диапазона")
        a, b = by_id.get(right), by_id.get(left)
        if a is None or b is None:
            problems.append(
                f"совместимость на участке {segment}: неизвестная работа в паре ({right}, {left})"
            )
            continue
        if a.direction is b.direction:
            problems.append(
                f"совместимость на участке {segment}: пара ({right}, {left}) не двудольная"
            )
    return problems


@dataclass(frozen=True, slots=True)
class Schedule:
    starts: Mapping[tuple[int, int], Fraction]

    def start(self, job_id: int, segment: int) -> Fraction:
        value = self.starts.get((job_id, segment))
        if value is None:
            raise MissingStartTime(job_id, segment)
        return value

    def shifted(self, job_id: int, segment: int, delta: Fraction) -> Schedule:
        starts = dict(self.starts)
        starts[(job_id, segment)] = starts[(job_id, segment)] + delta
        return Schedule(starts)
