from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

from bisched.core.errors import DomainMismatch
from bisched.core.model import Instance, Job, Schedule

logger = logging.getLogger(__name__)

RELEASE = 1
ROUTE_ORDER = 2
PROCESSING = 3
RUNNING = 4


@dataclass(frozen=True, slots=True)
class Violation:
    condition: int
    jobs: tuple[int, ...]
    segment: int
    detail: str

    def involves(self, job_id: int) -> bool:
        return job_id in self.jobs


def completion_time(instance: Instance, schedule: Schedule, job_id: int) -> Fraction:
    job = instance.job(job_id)
    return schedule.start(job.id, job.target_seg) + instance.running_time(job, job.target_seg)


def _overlap(a_start: Fraction, a_len: Fraction, b_start: Fraction, b_len: Fraction) -> bool:
    # полуинтервалы [S, S+len); пустые ни с чем не пересекаются
    if a_len <= 0 or b_len <= 0:
        return False
    return a_start < b_start + b_len and b_start < a_start + a_len


def check_domain(instance: Instance, schedule: Schedule) -> None:
    expected = instance.domain()
    actual = set(schedule.starts)
    if expected == actual:
        return
    missing = sorted(expected - actual)[:5]
    extra = sorted(actual - expected)[:5]
    raise DomainMismatch(
        f"Расписание не совпадает с маршрутами: нет {missing}, лишние {extra}."
    )


def validate_schedule(instance: Instance, schedule: Schedule) -> list[Violation]:
    check_domain(instance, schedule)
    violations: list[Violation] = []

    for job in instance.jobs:
        first = schedule.start(job.id, job.start_seg)
        if first < job.release:
            detail = f"старт {first} < release {job.release}"
            violations.append(Violation(RELEASE, (job.id,), job.start_seg, detail))
        for segment in job.route[:-1]:
            nxt = job.next_segment(segment)
            assert nxt is not None
            arrival = schedule.start(job.id, segment) + instance.running_time(job, segment)
            if schedule.start(job.id, nxt) < arrival:
                violations.append(
                    Violation(
                        ROUTE_ORDER,
                        (job.id,),
                        nxt,
                        f"старт {schedule.start(job.id, nxt)} раньше прибытия {arrival}",
                    )
                )

    for segment in instance.segments:
        on_segment = sorted(
            instance.jobs_on(segment.index),
            key=lambda job: (schedule.start(job.id, segment.index), job.id),
        )
        # сканирование по стартам: пара проверяется, только если b стартует до конца a
        for pos, a in enumerate(on_segment):
            horizon = schedule.start(a.id, segment.index) + instance.running_time(a, segment.index)
            for b in on_segment[pos + 1 :]:
                if schedule.start(b.id, segment.index) >= horizon:
                    break
                violation = _pair_violation(instance, schedule, segment.index, a, b)
                if violation is not None:
                    violations.append(violation)

    if violations:
        logger.debug("Найдено нарушений: %d", len(violations))
    return violations


def _pair_violation(
    instance: Instance, schedule: Schedule, segment: int, a: Job, b: Job
) -> Violation | None:
    sa = schedule.start(a.id, segment)
    sb = schedule.start(b.id, segment)
    if a.direction is b.direction:
        if _overlap(sa, a.proc, sb, b.proc):
            return Violation(PROCESSING, (a.id, b.id), segment, "обработка пересекается")
        return None
    if instance.compat.compatible(segment, a.id, b.id):
        return None
    if _overlap(sa, instance.running_time(a, segment), sb, instance.running_time(b, segment)):
        return Violation(RUNNING, (a.id, b.id), segment, "встречные работы на участке одновременно")
    return None
