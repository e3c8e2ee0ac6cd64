from __future__ import annotations

from fractions import Fraction

import pytest

from bisched.core.errors import PreconditionViolated
from bisched.core.model import Direction, Instance, Job, Segment
from bisched.core.objectives import Objective
from bisched.reductions.lift import lift_scale, lift_unit_processing
from bisched.solvers.oracle import solve_exact

R = Direction.RIGHTBOUND
L = Direction.LEFTBOUND


def _opposing_pair() -> Instance:
    segments = (Segment(1, Fraction(1)),)
    return Instance(segments, (Job(1, R, 0, 0, 1, 1), Job(2, L, 0, 0, 1, 1)))


def test_scale_and_shape() -> None:
    source = _opposing_pair()
    assert lift_scale(source) == 4
    lifted = lift_unit_processing(source)
    assert all(segment.transit == 4 for segment in lifted.segments)
    assert all(job.proc == 1 for job in lifted.jobs)
    assert [job.release for job in lifted.jobs] == [0, 0]


def test_optimum_lands_in_scaled_window() -> None:
    source = _opposing_pair()
    lifted = lift_unit_processing(source)
    waiting = solve_exact(source, Objective.SUM_WAITING).value
    lifted_waiting = solve_exact(lifted, Objective.SUM_WAITING).value
    scale = lift_scale(source)
    assert waiting * scale <= lifted_waiting < (waiting + 1) * scale


def test_multiplicity_is_expanded_first() -> None:
    segments = (Segment(1, Fraction(1)), Segment(2, Fraction(1)))
    source = Instance(segments, (Job(1, R, 1, 0, 1, 2, multiplicity=2),))
    assert lift_scale(source) == 2 * 2 * 2
    lifted = lift_unit_processing(source)
    assert lifted.n == 2
    assert all(job.release == 8 for job in lifted.jobs)


def test_applies_only_once() -> None:
    lifted = lift_unit_processing(_opposing_pair())
    with pytest.raises(PreconditionViolated):
        lift_unit_processing(lifted)
