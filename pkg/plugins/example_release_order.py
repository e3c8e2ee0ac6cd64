from __future__ import annotations

from fractions import Fraction

from bisched.core.model import Direction, Instance, Job
from bisched.core.objectives import objectives
from bisched.solvers.base import SolveRequest, SolveResult
from bisched.solvers.greedy import list_schedule


def _release_first(
    job: Job, segment: int, earliest: Fraction, current: Direction | None
) -> tuple[object, ...]:
    return (job.release, earliest, job.id)


class ReleaseOrderSolver:
    """Пример внешнего решателя: на каждом участке работы идут строго в порядке release."""

    solver_id = "example_release_order"
    title = "Пример: порядок по release"

    def solve(self, instance: Instance, request: SolveRequest) -> SolveResult:
        schedule = list_schedule(instance, _release_first)
        value = objectives(instance, schedule).value(request.objective)
        return SolveResult(schedule, value, request.objective)


def get_solver() -> ReleaseOrderSolver:
    return ReleaseOrderSolver()
