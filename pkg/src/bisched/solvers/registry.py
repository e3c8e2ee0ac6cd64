from __future__ import annotations

from bisched.core.errors import AppError
from bisched.solvers.base import Solver


class SolverRegistry:
    def __init__(self) -> None:
        self._solvers: dict[str, Solver] = {}

    def register(self, solver: Solver) -> None:
        self._solvers[solver.solver_id] = solver

    def get(self, solver_id: str) -> Solver:
        solver = self._solvers.get(solver_id)
        if solver is None:
            known = ", ".join(self.all_ids())
            raise AppError(f"Решатель '{solver_id}' не найден в реестре (доступны: {known}).")
        return solver

    def all_ids(self) -> list[str]:
        return sorted(self._solvers.keys())

    def all(self) -> list[Solver]:
        return [self._solvers[key] for key in self.all_ids()]
