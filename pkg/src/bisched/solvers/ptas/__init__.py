from __future__ import annotations

from bisched.solvers.ptas.blocks import PtasResult, block_cost, safety_net_respected, solve_ptas
from bisched.solvers.ptas.certificate import RatioCertificate
from bisched.solvers.ptas.config import PtasConfig
from bisched.solvers.ptas.rounding import normalize, pack_small_jobs

__all__ = [
    "PtasConfig",
    "PtasResult",
    "RatioCertificate",
    "block_cost",
    "normalize",
    "pack_small_jobs",
    "safety_net_respected",
    "solve_ptas",
]
