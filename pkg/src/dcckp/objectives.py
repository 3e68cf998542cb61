"""Fitness formulations for the dynamic chance-constrained knapsack.

Two formulations are provided. ``Formulation2D`` scores (profit, w_alpha) for one fixed
confidence level. ``Formulation3D`` scores (profit, expected weight, variance) and is
feasible for a whole range of confidence levels at once. Outside the feasibility band
both switch to penalty values that are strictly worse than anything feasible.

Objective vectors carry their optimisation senses; ``normalized`` flips minimised
coordinates so every comparison can assume maximisation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

from .model import Instance, Solution
from .stochastic import k_alpha, w_alpha_max

MAXIMIZE = 1
MINIMIZE = -1

SENSES_2D = (MAXIMIZE, MINIMIZE)
SENSES_3D = (MAXIMIZE, MINIMIZE, MINIMIZE)


@dataclass(frozen=True)
class ObjectiveVector:
    values: tuple[float, ...]
    senses: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != len(self.senses):
            raise ValueError("values and senses differ in length")

    @property
    def normalized(self) -> tuple[float, ...]:
        return tuple(v if s == MAXIMIZE else -v for v, s in zip(self.values, self.senses))

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]


class Dominance(enum.Enum):
    NONE = 0
    WEAK = 1
    STRONG = 2


def dominates(a: ObjectiveVector, b: ObjectiveVector) -> Dominance:
    """How ``a`` relates to ``b``: STRONG if at least as good everywhere and better
    somewhere, WEAK if equal, NONE otherwise."""
    if len(a) != len(b) or a.senses != b.senses:
        raise ValueError(f"cannot compare objective vectors of shape {a.senses} and {b.senses}")
    better = False
    for x, y in zip(a.normalized, b.normalized):
        if x < y:
            return Dominance.NONE
        if x > y:
            better = True
    return Dominance.STRONG if better else Dominance.WEAK


@dataclass(frozen=True)
class Formulation2D:
    """Profit vs. chance-constraint weight for a single alpha, with an eta band around B."""

    alpha: float
    B: float
    eta: float
    w_alpha_max: float
    k: float = field(init=False, repr=False)

    m = 2
    senses = SENSES_2D

    def __post_init__(self):
        if not 0.5 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (1/2, 1), got {self.alpha}")
        if self.eta < 0:
            raise ValueError(f"eta must be nonnegative, got {self.eta}")
        object.__setattr__(self, "k", k_alpha(self.alpha))

    @classmethod
    def for_instance(cls, inst: Instance, alpha: float, B: float, eta: float) -> Formulation2D:
        return cls(alpha, float(B), float(eta), w_alpha_max(inst, alpha))

    def with_capacity(self, B: float) -> Formulation2D:
        return replace(self, B=float(B))

    def weight(self, x: Solution) -> float:
        return x.mean_weight + self.k * math.sqrt(x.var_weight)

    def in_band(self, x: Solution) -> bool:
        w = self.weight(x)
        return self.B - self.eta <= w <= self.B + self.eta

    feasible = in_band

    def penalty(self, x: Solution) -> float:
        return abs(self.weight(x) - self.B) - self.eta

    def violation(self, x: Solution) -> float:
        return max(abs(self.weight(x) - self.B) - self.eta, 0.0)

    def fitness(self, x: Solution) -> ObjectiveVector:
        w = self.weight(x)
        if self.B - self.eta <= w <= self.B + self.eta:
            return ObjectiveVector((x.profit, w), SENSES_2D)
        e = abs(w - self.B) - self.eta
        return ObjectiveVector((-e, self.w_alpha_max + 1 + e), SENSES_2D)


@dataclass(frozen=True)
class Formulation3D:
    """Profit vs. expected weight vs. variance, feasible for an alpha range [alpha_low, alpha_high]."""

    alpha_low: float
    alpha_high: float
    B: float
    eta: float
    mu_cap: float
    var_cap: float
    k_low: float = field(init=False, repr=False)
    k_high: float = field(init=False, repr=False)

    m = 3
    senses = SENSES_3D

    def __post_init__(self):
        if not 0.5 < self.alpha_low < self.alpha_high < 1.0:
            raise ValueError(
                f"need 1/2 < alpha_low < alpha_high < 1, got [{self.alpha_low}, {self.alpha_high}]"
            )
        if self.eta < 0:
            raise ValueError(f"eta must be nonnegative, got {self.eta}")
        object.__setattr__(self, "k_low", k_alpha(self.alpha_low))
        object.__setattr__(self, "k_high", k_alpha(self.alpha_high))

    @classmethod
    def for_instance(
        cls, inst: Instance, alpha_low: float, alpha_high: float, B: float, eta: float
    ) -> Formulation3D:
        n = inst.n
        return cls(alpha_low, alpha_high, float(B), float(eta), n * inst.mu_max + 1, n * inst.v_max + 1)

    def with_capacity(self, B: float) -> Formulation3D:
        return replace(self, B=float(B))

    def weight_range(self, x: Solution) -> tuple[float, float]:
        sd = math.sqrt(x.var_weight)
        return x.mean_weight + self.k_low * sd, x.mean_weight + self.k_high * sd

    def feasible(self, x: Solution) -> bool:
        # [w_low, w_high] intersects [B - eta, B + eta]
        w_lo, w_hi = self.weight_range(x)
        return w_lo <= self.B + self.eta and w_hi >= self.B - self.eta

    def penalty(self, x: Solution) -> float:
        w_lo, w_hi = self.weight_range(x)
        return max((self.B - self.eta) - w_hi, w_lo - (self.B + self.eta))

    def violation(self, x: Solution) -> float:
        w_lo, w_hi = self.weight_range(x)
        below = max((self.B - self.eta) - w_hi, 0.0)
        above = max(w_lo - (self.B + self.eta), 0.0)
        return max(0.0, below + above)

    def fitness(self, x: Solution) -> ObjectiveVector:
        w_lo, w_hi = self.weight_range(x)
        if w_lo <= self.B + self.eta and w_hi >= self.B - self.eta:
            return ObjectiveVector((x.profit, x.mean_weight, x.var_weight), SENSES_3D)
        e = max((self.B - self.eta) - w_hi, w_lo - (self.B + self.eta))
        return ObjectiveVector((-e, self.mu_cap + e, self.var_cap + e), SENSES_3D)


Formulation = Formulation2D | Formulation3D


def penalty_2d(x: Solution, ctx: Formulation2D) -> float:
    return ctx.penalty(x)


def fitness_2d(x: Solution, ctx: Formulation2D) -> ObjectiveVector:
    return ctx.fitness(x)


def violation_2d(x: Solution, ctx: Formulation2D) -> float:
    return ctx.violation(x)


def feasible_3d(x: Solution, ctx: Formulation3D) -> bool:
    return ctx.feasible(x)


def penalty_3d(x: Solution, ctx: Formulation3D) -> float:
    return ctx.penalty(x)


def fitness_3d(x: Solution, ctx: Formulation3D) -> ObjectiveVector:
    return ctx.fitness(x)


def violation_3d(x: Solution, ctx: Formulation3D) -> float:
    return ctx.violation(x)


def repair_fitness(x: Solution, violation: float, inst: Instance) -> float:
    """f_r(x) = p(x) - (n * p_max + 1) * h(x)."""
    if violation < 0:
        raise ValueError(f"constraint violation must be nonnegative, got {violation}")
    return x.profit - (inst.n * inst.p_max + 1) * violation


def repair_key(x: Solution, violation: float, inst: Instance) -> tuple[bool, float]:
    """Sort key for the repair search: any zero-violation solution beats any violating one,
    even when the violation is fractional and too small for the multiplier to separate them."""
    return violation == 0, repair_fitness(x, violation, inst)
