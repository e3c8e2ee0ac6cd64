from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction

from bisched.core.errors import InfeasibleSchedule
from bisched.core.model import Instance, Schedule
from bisched.core.validation import completion_time, validate_schedule


class Objective(StrEnum):
    SUM_COMPLETION = "sumc"
    MAKESPAN = "makespan"
    SUM_WAITING = "sumw"


@dataclass(frozen=True, slots=True)
class ObjectiveReport:
    per_job_completion: dict[int, Fraction]
    total_completion: Fraction
    makespan: Fraction
    total_waiting: Fraction

    def value(self, objective: Objective) -> Fraction:
        if objective is Objective.SUM_COMPLETION:
            return self.total_completion
        if objective is Objective.MAKESPAN:
            return self.makespan
        return self.total_waiting


def waiting_offset(instance: Instance) -> Fraction:
    """Σ r_j + Σ (p_j + τ_i) over routes, weighted by multiplicity."""
    return sum(
        (job.multiplicity * instance.unhindered_completion(job) for job in instance.jobs),
        Fraction(0),
    )


def objectives(instance: Instance, schedule: Schedule, *, check: bool = True) -> ObjectiveReport:
    if check:
        violations = validate_schedule(instance, schedule)
        if violations:
            first = violations[0]
            raise InfeasibleSchedule(
                f"Расписание недопустимо: {len(violations)} нарушений, первое: условие "
                f"{first.condition}, работы {first.jobs}, участок {first.segment}."
            )
    per_job = {job.id: completion_time(instance, schedule, job.id) for job in instance.jobs}
    total = sum(
        (job.multiplicity * per_job[job.id] for job in instance.jobs), Fraction(0)
    )
    makespan = max(per_job.values(), default=Fraction(0))
    return ObjectiveReport(
        per_job_completion=per_job,
        total_completion=total,
        makespan=makespan,
        total_waiting=total - waiting_offset(instance),
    )


def objective_value(instance: Instance, schedule: Schedule, objective: Objective) -> Fraction:
    return objectives(instance, schedule).value(objective)
