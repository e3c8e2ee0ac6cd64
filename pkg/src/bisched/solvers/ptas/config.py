from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from bisched.core.errors import ParseError


@dataclass(frozen=True, slots=True)
class PtasConfig:
    epsilon: Fraction
    # интервалов в блоке: работа, стартовавшая в B_t, заканчивается к концу B_{t+1}
    sigma: int
    # запас интервалов после release, в течение которых работа обязана стартовать
    sigma_safety: int
    grid_per_interval: int
    large_kinds: int
    large_per_kind: int
    block_capacity: int | None = None
    safety_net: bool = True

    @property
    def base(self) -> Fraction:
        return 1 + self.epsilon

    @classmethod
    def derive(
        cls,
        epsilon: Fraction,
        *,
        block_capacity: int | None = None,
        safety_net: bool = True,
    ) -> PtasConfig:
        if epsilon <= 0:
            raise ParseError("epsilon", "epsilon должен быть положительным")
        base = 1 + epsilon
        target = base / epsilon
        sigma = 1
        while base**sigma < target:
            sigma += 1

        eps = float(epsilon)
        log_inv = math.log(1 / eps, 1 + eps) if eps < 1 else 0.0
        need = 2 * (1 / eps + (20 / eps**5) * log_inv)
        sigma_safety = 1 + max(0, math.ceil(math.log(need, 1 + eps))) if need > 1 else 1

        return cls(
            epsilon=epsilon,
            sigma=sigma,
            sigma_safety=sigma_safety,
            grid_per_interval=math.ceil(1 / (epsilon * epsilon)),
            large_kinds=max(1, math.ceil(5 * log_inv)),
            large_per_kind=max(1, math.floor(4 / (epsilon * epsilon))),
            block_capacity=block_capacity,
            safety_net=safety_net,
        )
