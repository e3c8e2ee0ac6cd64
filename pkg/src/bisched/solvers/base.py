from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Protocol

from bisched.config.schema import AppConfig
from bisched.core.model import Instance, Schedule
from bisched.core.objectives import Objective

if TYPE_CHECKING:
    from bisched.solvers.ptas.certificate import RatioCertificate


@dataclass(slots=True)
class SolveRequest:
    objective: Objective = Objective.SUM_COMPLETION
    epsilon: Fraction | None = None
    config: AppConfig = field(default_factory=AppConfig)


@dataclass(slots=True)
class SolveResult:
    schedule: Schedule
    value: Fraction
    objective: Objective
    stats: dict[str, int] = field(default_factory=dict)
    certificate: RatioCertificate | None = None


class Solver(Protocol):
    solver_id: str
    title: str

    def solve(self, instance: Instance, request: SolveRequest) -> SolveResult:
        ...
