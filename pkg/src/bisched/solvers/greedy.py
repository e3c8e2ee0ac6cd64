from __future__ import annotations

import logging
from collections.abc import Callable
from fractions import Fraction

from bisched.core.model import Direction, Instance, Job, Schedule
from bisched.solvers.oracle import conflict_lag

logger = logging.getLogger(__name__)

# (job, segment, earliest start, direction last served on the segment) -> sort key
Priority = Callable[[Job, int, Fraction, Direction | None], tuple[object, ...]]


def dispatch_priority(
    job: Job, segment: int, earliest: Fraction, current: Direction | None
) -> tuple[object, ...]:
    """Earliest start first; keeping the segment's current direction only breaks ties.

    Direction persistence needs no weight of its own: behind the last placed job a follower in
    the same direction waits p, an incompatible opposing one waits p + τ, so the earliest start
    already favours the current direction.
    """
    keeps_direction = 0 if current is None or job.direction is current else 1
    return (earliest, keeps_direction, job.release, job.id)


def list_schedule(instance: Instance, priority: Priority = dispatch_priority) -> Schedule:
    """Append ready operations one at a time to the end of their segment's order.

    Each operation starts at the earliest time compatible with everything already placed on its
    segment, so the result is feasible for any priority.
    """
    pos = {job.id: 0 for job in instance.jobs}
    starts: dict[tuple[int, int], Fraction] = {}
    placed: dict[int, list[tuple[Job, Fraction]]] = {s.index: [] for s in instance.segments}
    current: dict[int, Direction | None] = {s.index: None for s in instance.segments}
    remaining = sum(len(job.route) for job in instance.jobs)

    while remaining:
        best: tuple[tuple[object, ...], Job, int, Fraction] | None = None
        for job in instance.jobs:
            route = job.route
            k = pos[job.id]
            if k == len(route):
                continue
            segment = route[k]
            if k == 0:
                earliest = job.release
            else:
                prev = route[k - 1]
                earliest = starts[(job.id, prev)] + instance.running_time(job, prev)
            for other, other_start in placed[segment]:
                lag = conflict_lag(instance, segment, other, job)
                if lag is not None:
                    earliest = max(earliest, other_start + lag)
            key = priority(job, segment, earliest, current[segment])
            if best is None or key < best[0]:
                best = (key, job, segment, earliest)
        assert best is not None
        _, job, segment, earliest = best
        starts[(job.id, segment)] = earliest
        placed[segment].append((job, earliest))
        current[segment] = job.direction
        pos[job.id] += 1
        remaining -= 1
    return Schedule(starts)


def greedy_baseline(instance: Instance) -> Schedule:
    schedule = list_schedule(instance)
    logger.debug("Жадное расписание построено для %d работ", instance.n)
    return schedule
