from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from bisched.bench.generator import Profile, gen_random
from bisched.config.schema import PtasDefaults
from bisched.core.errors import PreconditionViolated, UnsupportedCompatibility
from bisched.core.model import CompatibilityGraph, Direction, Instance, Job, Segment
from bisched.core.objectives import Objective
from bisched.core.validation import validate_schedule
from bisched.solvers.oracle import solve_exact
from bisched.solvers.ptas import (
    PtasConfig,
    block_cost,
    normalize,
    pack_small_jobs,
    safety_net_respected,
    solve_ptas,
)
from bisched.solvers.ptas.blocks import Frontier, PtasStructure, build_units

R = Direction.RIGHTBOUND
L = Direction.LEFTBOUND
ONE = (Segment(1, Fraction(1)),)


def _corpus(size: int, seed: int) -> list[Instance]:
    rng = np.random.default_rng(seed)
    corpus: list[Instance] = []
    for raw in rng.integers(0, 10_000, size=size):
        generated = gen_random(int(rng.integers(2, 5)), 1, int(raw), Profile.GENERAL)
        # PTAS работает с пустым или полным двудольным графом
        corpus.append(Instance(generated.segments, generated.jobs))
    return corpus


def test_config_derivation() -> None:
    config = PtasConfig.derive(Fraction(1))
    assert config.base == 2
    assert config.sigma == 1
    half = PtasConfig.derive(Fraction(1, 2))
    assert half.sigma == 3
    assert half.grid_per_interval == 4


def test_processing_rounds_up_to_power() -> None:
    instance = Instance(ONE, (Job(1, R, 0, 3, 1, 1),))
    rounded = normalize(instance, PtasConfig.derive(Fraction(1)))
    (job,) = rounded.jobs
    assert rounded.scale == 1
    assert job.proc == 4
    assert any(reason == "processing rounded up" for reason, _ in rounded.certificate.factors)


def test_partial_compatibility_is_rejected() -> None:
    jobs = (Job(1, R, 0, 1, 1, 1), Job(2, L, 0, 1, 1, 1), Job(3, L, 0, 1, 1, 1))
    instance = Instance(ONE, jobs, CompatibilityGraph.from_pairs([(1, 1, 2)]))
    with pytest.raises(UnsupportedCompatibility):
        normalize(instance, PtasConfig.derive(Fraction(1)))


def test_packing_keeps_every_job() -> None:
    jobs = tuple(Job(i, R, 8, Fraction(1, 64), 1, 1) for i in range(1, 6))
    jobs += (Job(6, L, 0, 2, 1, 1),)
    rounded = normalize(Instance(ONE, jobs), PtasConfig.derive(Fraction(1, 2)))
    updated, packs = pack_small_jobs(rounded)
    assert {job.job_id for job in updated.jobs} == set(range(1, 7))
    packed = [member for pack in packs for member in pack.members]
    assert len(packed) == len(set(packed))
    for pack in packs:
        procs = [next(j.proc for j in updated.jobs if j.job_id == m) for m in pack.members]
        assert procs == sorted(procs)


def test_empty_block_costs_nothing() -> None:
    instance = Instance(ONE, (Job(1, R, 0, 1, 1, 1), Job(2, L, 0, 1, 1, 1)))
    rounded = normalize(instance, PtasConfig.derive(Fraction(1)))
    structure = PtasStructure(rounded, build_units(rounded))
    frontier = Frontier(Fraction(1), Fraction(1))
    assert block_cost(structure, 0, frontier, Frontier(Fraction(2), Fraction(2)), []) == 0


def test_two_opposing_jobs_within_ratio() -> None:
    instance = Instance(ONE, (Job(1, R, 0, 1, 1, 1), Job(2, L, 0, 1, 1, 1)))
    result = solve_ptas(instance, Fraction(1, 2))
    assert validate_schedule(instance, result.schedule) == []
    assert 6 <= result.value <= 3 * 6
    assert result.certificate.value == result.value
    assert result.certificate.stretch >= 1


def test_never_beats_the_optimum_and_stays_feasible() -> None:
    ratios: list[float] = []
    for instance in _corpus(12, seed=31):
        optimum = solve_exact(instance).value
        result = solve_ptas(instance, Fraction(1, 2))
        assert validate_schedule(instance, result.schedule) == []
        assert result.value >= optimum
        ratios.append(float(result.value / optimum) if optimum else 1.0)
    assert max(ratios) <= 3.0


def test_ratio_shrinks_with_epsilon_on_a_seeded_corpus() -> None:
    corpus = _corpus(100, seed=2024)
    optima = [solve_exact(instance).value for instance in corpus]
    means: list[Fraction] = []
    for epsilon in (Fraction(1), Fraction(1, 2), Fraction(1, 4), Fraction(1, 10)):
        ratios: list[Fraction] = []
        for instance, optimum in zip(corpus, optima):
            result = solve_ptas(instance, epsilon)
            assert validate_schedule(instance, result.schedule) == []
            assert result.value >= optimum
            ratios.append(result.value / optimum if optimum else Fraction(1))
        if epsilon == Fraction(1, 2):
            assert max(ratios) <= 3
        means.append(sum(ratios, Fraction(0)) / len(ratios))
    assert all(later <= earlier for earlier, later in zip(means, means[1:]))


def test_safety_net_is_reported() -> None:
    for instance in _corpus(5, seed=41):
        result = solve_ptas(instance, Fraction(1))
        assert result.certificate.safety_net_relaxed or safety_net_respected(result)


def test_complete_compatibility_is_supported() -> None:
    jobs = (Job(1, R, 0, 2, 1, 1), Job(2, L, 0, 1, 1, 1), Job(3, L, 1, 1, 1, 1))
    compat = CompatibilityGraph.from_pairs([(1, 1, 2), (1, 1, 3)])
    instance = Instance(ONE, jobs, compat)
    result = solve_ptas(instance, Fraction(1, 2), Objective.SUM_COMPLETION, PtasDefaults())
    assert validate_schedule(instance, result.schedule) == []
    assert result.value >= solve_exact(instance).value


def test_makespan_is_rejected() -> None:
    instance = Instance(ONE, (Job(1, R, 0, 1, 1, 1),))
    with pytest.raises(PreconditionViolated):
        solve_ptas(instance, Fraction(1), Objective.MAKESPAN)
