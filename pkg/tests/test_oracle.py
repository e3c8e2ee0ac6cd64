from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest

from bisched.bench.generator import Profile, gen_random
from bisched.config.schema import SolverLimits
from bisched.core.errors import InstanceTooLarge, PreconditionViolated, ProfileDomainMismatch
from bisched.core.model import CompatibilityGraph, Direction, Instance, Job, Schedule, Segment
from bisched.core.objectives import Objective, objectives
from bisched.core.validation import validate_schedule
from bisched.solvers.greedy import dispatch_priority, greedy_baseline, list_schedule
from bisched.solvers.oracle import (
    Infeasible,
    SequenceProfile,
    conflict_lag,
    solve_exact,
    timing_from_profile,
)

R = Direction.RIGHTBOUND
L = Direction.LEFTBOUND
ONE = (Segment(1, Fraction(1)),)


def _pair(compatible: bool) -> Instance:
    jobs = (Job(1, R, 0, 1, 1, 1), Job(2, L, 0, 1, 1, 1))
    return Instance(ONE, jobs, CompatibilityGraph.from_pairs([(1, 1, 2)] if compatible else []))


def test_timing_uses_processing_lag_for_same_direction() -> None:
    instance = Instance(ONE, (Job(1, R, 0, 1, 1, 1), Job(2, R, 0, 1, 1, 1)))
    timed = timing_from_profile(instance, SequenceProfile({1: (1, 2)}))
    assert isinstance(timed, Schedule)
    assert (timed.start(1, 1), timed.start(2, 1)) == (0, 1)


def test_timing_uses_running_lag_for_incompatible_pair() -> None:
    timed = timing_from_profile(_pair(compatible=False), SequenceProfile({1: (1, 2)}))
    assert isinstance(timed, Schedule)
    assert (timed.start(1, 1), timed.start(2, 1)) == (0, 2)
    assert conflict_lag(_pair(compatible=True), 1, *_pair(compatible=True).jobs) is None


def test_crossing_orders_form_a_cycle() -> None:
    segments = (Segment(1, Fraction(1)), Segment(2, Fraction(1)))
    jobs = (Job(1, R, 0, 1, 1, 2), Job(2, L, 0, 1, 2, 1))
    instance = Instance(segments, jobs)
    timed = timing_from_profile(instance, SequenceProfile({1: (2, 1), 2: (1, 2)}))
    assert isinstance(timed, Infeasible)
    assert timed.cycle


def test_profile_must_cover_every_segment() -> None:
    with pytest.raises(ProfileDomainMismatch):
        timing_from_profile(_pair(compatible=False), SequenceProfile({1: (1,)}))


def test_small_examples() -> None:
    assert solve_exact(_pair(compatible=False)).value == 6
    assert solve_exact(_pair(compatible=True)).value == 4
    three = Instance(ONE, tuple(Job(i, R, 0, 1, 1, 1) for i in (1, 2, 3)))
    assert solve_exact(three).value == 9
    assert solve_exact(_pair(compatible=False), Objective.SUM_WAITING).value == 2
    assert solve_exact(_pair(compatible=False), Objective.MAKESPAN).value == 4


def test_single_direction_matches_fifo() -> None:
    releases = (3, 0, 5, 1)
    jobs = tuple(Job(i, R, r, 2, 1, 1) for i, r in enumerate(releases, start=1))
    instance = Instance(ONE, jobs)
    fifo = list_schedule(instance, lambda job, seg, earliest, current: (job.release, job.id))
    assert solve_exact(instance).value == objectives(instance, fifo).total_completion


def test_dispatch_keeps_direction_only_on_ties() -> None:
    right, left = Job(1, R, 0, 1, 1, 1), Job(2, L, 0, 1, 1, 1)
    assert dispatch_priority(left, 1, Fraction(0), R) < dispatch_priority(right, 1, Fraction(1), R)
    assert dispatch_priority(right, 1, Fraction(1), R) < dispatch_priority(left, 1, Fraction(1), R)

    jobs = (Job(1, R, 0, 2, 1, 1), Job(2, R, 0, 2, 1, 1), Job(3, L, 0, 2, 1, 1))
    instance = Instance(ONE, jobs)
    first, follower, opposing = jobs
    assert conflict_lag(instance, 1, first, follower) == 2
    assert conflict_lag(instance, 1, first, opposing) == 3
    schedule = greedy_baseline(instance)
    assert [schedule.start(job.id, 1) for job in jobs] == [0, 2, 5]


def _all_orders_best(instance: Instance) -> Fraction:
    per_segment = [
        [tuple(order) for order in itertools.permutations(j.id for j in instance.jobs_on(s.index))]
        for s in instance.segments
    ]
    best: Fraction | None = None
    for combo in itertools.product(*per_segment):
        profile = SequenceProfile({s.index: order for s, order in zip(instance.segments, combo)})
        timed = timing_from_profile(instance, profile)
        if isinstance(timed, Infeasible):
            continue
        value = objectives(instance, timed).total_completion
        best = value if best is None or value < best else best
    assert best is not None
    return best


def test_matches_exhaustive_profile_enumeration() -> None:
    rng = np.random.default_rng(11)
    shapes = [(4, 1)] * 100 + [(4, 2)] * 30
    for (n, m), seed in zip(shapes, rng.integers(0, 10_000, size=len(shapes))):
        instance = gen_random(n, m, int(seed), Profile.GENERAL)
        solution = solve_exact(instance)
        assert validate_schedule(instance, solution.schedule) == []
        assert solution.value == _all_orders_best(instance)
        assert solution.value <= objectives(instance, greedy_baseline(instance)).total_completion


def test_zero_processing_job_keeps_its_place_at_a_shared_start() -> None:
    # J4 (p=0) и J2 стартуют в 0; при сортировке по (старт, id) J4 сдвигается на 1/2
    jobs = (
        Job(1, R, 0, 3, 1, 1),
        Job(2, L, 0, Fraction(1, 2), 1, 1),
        Job(3, R, 5, 3, 1, 1),
        Job(4, L, 0, 0, 1, 1),
    )
    instance = Instance((Segment(1, Fraction(3)),), jobs)
    solution = solve_exact(instance)
    assert solution.value == Fraction(57, 2)
    assert solution.value == _all_orders_best(instance)
    assert validate_schedule(instance, solution.schedule) == []
    assert solution.schedule.start(4, 1) == 0


def test_no_random_delay_beats_the_optimum() -> None:
    instance = gen_random(5, 2, 3, Profile.UNIT_P)
    best = solve_exact(instance).value
    rng = np.random.default_rng(5)
    base = greedy_baseline(instance)
    for _ in range(200):
        starts = dict(base.starts)
        for job in instance.jobs:
            delay = Fraction(int(rng.integers(0, 3)))
            for segment in job.route:
                starts[(job.id, segment)] += delay
        timed = timing_from_profile(
            instance, SequenceProfile.from_schedule(instance, Schedule(starts))
        )
        if isinstance(timed, Infeasible):
            continue
        assert objectives(instance, timed).total_completion >= best


def test_limits_are_enforced() -> None:
    jobs = tuple(Job(i, R, 0, 1, 1, 1) for i in range(1, 10))
    with pytest.raises(InstanceTooLarge):
        solve_exact(Instance(ONE, jobs))
    crowd = Instance(ONE, (Job(1, R, 0, 0, 1, 1, multiplicity=2),))
    with pytest.raises(PreconditionViolated):
        solve_exact(crowd, limits=SolverLimits(oracle_max_jobs=20))
