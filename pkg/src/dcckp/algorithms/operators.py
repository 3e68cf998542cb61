"""Standard bit-flip mutation and uniform crossover on knapsack solutions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..model import Instance, Solution


@dataclass(frozen=True)
class VariationConfig:
    mutation_rate: float | None = None  # None means 1/n
    crossover_prob: float = 0.8

    def __post_init__(self):
        if self.mutation_rate is not None and not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError(f"mutation rate must lie in [0, 1], got {self.mutation_rate}")
        if not 0.0 <= self.crossover_prob <= 1.0:
            raise ValueError(f"crossover probability must lie in [0, 1], got {self.crossover_prob}")

    def rate_for(self, n: int) -> float:
        return 1.0 / n if self.mutation_rate is None else self.mutation_rate


def mutate(x: Solution, inst: Instance, rng: np.random.Generator, rate: float | None = None) -> Solution:
    """Flip each bit independently with probability ``rate`` (default 1/n)."""
    n = x.n
    p = 1.0 / n if rate is None else rate
    idx = np.flatnonzero(rng.random(n) < p)
    return x.with_flips(idx, inst)


def uniform_crossover(
    a: Solution, b: Solution, inst: Instance, rng: np.random.Generator, prob: float = 0.8
) -> Solution:
    """With probability ``prob`` take each bit from ``a`` or ``b`` with equal chance;
    otherwise return a copy of ``a``."""
    if a.n != b.n:
        raise ValueError(f"parents differ in length: {a.n} vs {b.n}")
    if rng.random() >= prob:
        return a
    pick_a = rng.random(a.n) < 0.5
    return Solution.from_bits(np.where(pick_a, a.bits, b.bits), inst)
