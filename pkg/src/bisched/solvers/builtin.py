from __future__ import annotations

from bisched.core.model import Instance
from bisched.core.objectives import objectives
from bisched.solvers.base import SolveRequest, SolveResult
from bisched.solvers.dp_multi import solve_dpm
from bisched.solvers.dp_single import solve_dp1
from bisched.solvers.greedy import greedy_baseline
from bisched.solvers.oracle import solve_exact
from bisched.solvers.ptas.blocks import solve_ptas


class OracleSolver:
    solver_id = "oracle"
    title = "Точный перебор активных расписаний"

    def solve(self, instance: Instance, request: SolveRequest) -> SolveResult:
        solution = solve_exact(instance, request.objective, request.config.limits)
        return SolveResult(
            solution.schedule, solution.value, request.objective, {"nodes": solution.nodes}
        )


class Dp1Solver:
    solver_id = "dp1"
    title = "Динамика для одного участка, одинаковые p_j"

    def solve(self, instance: Instance, request: SolveRequest) -> SolveResult:
        solution = solve_dp1(instance, request.objective, request.config.limits)
        return SolveResult(
            solution.schedule, solution.value, request.objective, {"states": solution.states}
        )


class DpmSolver:
    solver_id = "dpm"
    title = "Динамика для m участков (p=1 или p=0)"

    def solve(self, instance: Instance, request: SolveRequest) -> SolveResult:
        solution = solve_dpm(
            instance, objective=request.objective, limits=request.config.limits
        )
        return SolveResult(
            solution.schedule, solution.value, request.objective, {"states": solution.states}
        )


class PtasSolver:
    solver_id = "ptas"
    title = "PTAS для одного участка"

    def solve(self, instance: Instance, request: SolveRequest) -> SolveResult:
        epsilon = request.epsilon or request.config.ptas.epsilon_value()
        result = solve_ptas(instance, epsilon, request.objective, request.config.ptas)
        stats = {"blocks": result.certificate.blocks, "states": result.certificate.states}
        return SolveResult(
            result.schedule, result.value, request.objective, stats, result.certificate
        )


class GreedySolver:
    solver_id = "greedy"
    title = "Жадная диспетчеризация (базовая линия)"

    def solve(self, instance: Instance, request: SolveRequest) -> SolveResult:
        schedule = greedy_baseline(instance)
        value = objectives(instance, schedule).value(request.objective)
        return SolveResult(schedule, value, request.objective)
