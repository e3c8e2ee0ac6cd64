from __future__ import annotations

from bisched.solvers.builtin import (
    Dp1Solver,
    DpmSolver,
    GreedySolver,
    OracleSolver,
    PtasSolver,
)
from bisched.solvers.registry import SolverRegistry


def build_builtin_registry() -> SolverRegistry:
    registry = SolverRegistry()
    registry.register(OracleSolver())
    registry.register(Dp1Solver())
    registry.register(DpmSolver())
    registry.register(PtasSolver())
    registry.register(GreedySolver())
    return registry
