from __future__ import annotations

from fractions import Fraction

from bisched.core.model import Direction, Instance, Job, Schedule, Segment
from bisched.core.objectives import Objective, objective_value, objectives, waiting_offset


def _instance() -> Instance:
    jobs = (
        Job(1, Direction.RIGHTBOUND, Fraction(0), Fraction(0), 1, 2, multiplicity=3),
        Job(2, Direction.LEFTBOUND, Fraction(1), Fraction(0), 2, 1),
    )
    return Instance((Segment(1, Fraction(1)), Segment(2, Fraction(1))), jobs)


def test_multiplicity_weights_every_sum() -> None:
    instance = _instance()
    assert waiting_offset(instance) == 3 * 2 + (1 + 2)
    schedule = Schedule(
        {
            (1, 1): Fraction(0),
            (1, 2): Fraction(1),
            (2, 2): Fraction(2),
            (2, 1): Fraction(3),
        }
    )
    report = objectives(instance, schedule)
    assert report.per_job_completion == {1: 2, 2: 4}
    assert report.total_completion == 3 * 2 + 4
    assert report.makespan == 4
    assert report.total_waiting == 1


def test_value_selects_objective() -> None:
    instance = _instance()
    schedule = Schedule(
        {
            (1, 1): Fraction(0),
            (1, 2): Fraction(1),
            (2, 2): Fraction(2),
            (2, 1): Fraction(3),
        }
    )
    assert objective_value(instance, schedule, Objective.MAKESPAN) == 4
    assert objective_value(instance, schedule, Objective.SUM_WAITING) == 1
    assert Objective("sumc") is Objective.SUM_COMPLETION


def test_fractional_times_stay_exact() -> None:
    job = Job(1, Direction.RIGHTBOUND, Fraction(1, 3), Fraction(1, 2), 1, 1)
    instance = Instance((Segment(1, Fraction(1, 6)),), (job,))
    report = objectives(instance, Schedule({(1, 1): Fraction(1, 3)}))
    assert report.total_completion == Fraction(1)
    assert report.total_waiting == 0
