from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


def _default_epsilons() -> list[str]:
    return ["1", "1/2", "1/4", "1/10"]


@dataclass(slots=True)
class SolverLimits:
    oracle_max_jobs: int = 8
    oracle_max_segments: int = 3
    dp1_max_types: int = 4
    dpm_max_types: int = 8
    dpm_max_segments: int = 3
    dpm_max_transit: int = 3
    dpm_state_cap: int = 500_000


@dataclass(slots=True)
class PtasDefaults:
    epsilon: str = "1/2"
    # None: ёмкость блока выводится из оценок леммы и числа работ
    block_capacity: int | None = None
    safety_net: bool = True

    def epsilon_value(self) -> Fraction:
        return Fraction(self.epsilon)


@dataclass(slots=True)
class BenchDefaults:
    epsilons: list[str] = field(default_factory=_default_epsilons)
    workers: int = 1


@dataclass(slots=True)
class AppConfig:
    schema_version: int = 1
    limits: SolverLimits = field(default_factory=SolverLimits)
    ptas: PtasDefaults = field(default_factory=PtasDefaults)
    bench: BenchDefaults = field(default_factory=BenchDefaults)
