from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


@dataclass(slots=True)
class RatioCertificate:
    """Stretch factors actually applied on the way to the returned schedule."""

    epsilon: Fraction
    factors: list[tuple[str, Fraction]] = field(default_factory=list)
    lower_bound: Fraction = Fraction(0)
    value: Fraction = Fraction(0)
    safety_net_relaxed: bool = False
    blocks: int = 0
    states: int = 0

    def apply(self, reason: str, factor: Fraction) -> None:
        if all(name != reason for name, _ in self.factors):
            self.factors.append((reason, factor))

    @property
    def stretch(self) -> Fraction:
        product = Fraction(1)
        for _, factor in self.factors:
            product *= factor
        return product

    @property
    def ratio_to_lower_bound(self) -> Fraction:
        if self.lower_bound == 0:
            return Fraction(1)
        return self.value / self.lower_bound
