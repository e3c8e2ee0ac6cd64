from __future__ import annotations

import logging
from enum import StrEnum
from fractions import Fraction

import numpy as np

from bisched.core.errors import BadProfile
from bisched.core.model import CompatibilityGraph, Direction, Instance, Job, Segment

logger = logging.getLogger(__name__)


class Profile(StrEnum):
    IDENTICAL_P = "identical-p"
    UNIT_P = "unit-p"
    ZERO_P_UNIT_TAU = "zero-p-unit-tau"
    GENERAL = "general"


def parse_profile(raw: str) -> Profile:
    try:
        return Profile(raw)
    except ValueError as exc:
        known = ", ".join(p.value for p in Profile)
        raise BadProfile(f"Неизвестный профиль '{raw}' (доступны: {known}).") from exc


def _route(rng: np.random.Generator, direction: Direction, m: int) -> tuple[int, int]:
    low, high = sorted(int(v) for v in rng.integers(1, m + 1, size=2))
    return (low, high) if direction is Direction.RIGHTBOUND else (high, low)


def _typed_compat(
    rng: np.random.Generator, jobs: list[Job], m: int, types: int
) -> CompatibilityGraph:
    """Jobs of a direction fall into `types` classes; compatibility is decided per class pair."""
    kinds = {job.id: int(rng.integers(0, types)) for job in jobs}
    triples: list[tuple[int, int, int]] = []
    for segment in range(1, m + 1):
        allowed = rng.random((types, types)) < 0.5
        for right in jobs:
            if right.direction is not Direction.RIGHTBOUND:
                continue
            for left in jobs:
                if left.direction is not Direction.LEFTBOUND:
                    continue
                if allowed[kinds[right.id], kinds[left.id]]:
                    triples.append((segment, right.id, left.id))
    return CompatibilityGraph.from_pairs(triples)


def gen_random(n: int, m: int, seed: int, profile: Profile | str) -> Instance:
    """Seeded random instance; equal arguments give equal instances."""
    kind = profile if isinstance(profile, Profile) else parse_profile(profile)
    if n < 1 or m < 1:
        raise BadProfile("Число работ и число участков должны быть положительными.")
    rng = np.random.default_rng(seed)

    if kind is Profile.UNIT_P:
        transits = [Fraction(int(t)) for t in rng.integers(1, 3, size=m)]
    elif kind is Profile.GENERAL:
        transits = [Fraction(int(t)) for t in rng.integers(1, 4, size=m)]
    else:
        transits = [Fraction(1)] * m
    shared_proc = Fraction(int(rng.integers(1, 4)))

    jobs: list[Job] = []
    for job_id in range(1, n + 1):
        # первые две работы встречные, чтобы оба направления присутствовали
        if job_id <= 2:
            direction = Direction.RIGHTBOUND if job_id == 1 else Direction.LEFTBOUND
        else:
            direction = Direction.RIGHTBOUND if rng.random() < 0.5 else Direction.LEFTBOUND
        start, target = _route(rng, direction, m)
        release = Fraction(int(rng.integers(0, 2 * n)))
        if kind is Profile.IDENTICAL_P:
            proc = shared_proc
        elif kind is Profile.UNIT_P:
            proc = Fraction(1)
        elif kind is Profile.ZERO_P_UNIT_TAU:
            proc = Fraction(0)
        else:
            proc = Fraction(int(rng.integers(0, 7)), 2)
        jobs.append(Job(job_id, direction, release, proc, start, target))

    compat = _typed_compat(rng, jobs, m, types=2 if kind is not Profile.GENERAL else 3)
    segments = tuple(Segment(i + 1, t) for i, t in enumerate(transits))
    instance = Instance(segments, tuple(jobs), compat)
    logger.debug("Сгенерирован инстанс %s: n=%d, m=%d, seed=%d", kind.value, n, m, seed)
    return instance
