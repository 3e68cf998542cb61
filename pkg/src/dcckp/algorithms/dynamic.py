"""What an optimiser does when the knapsack capacity moves."""

from __future__ import annotations

from typing import Protocol, Sequence

import numpy as np

from ..model import Instance, Solution
from ..objectives import Formulation, repair_key
from .repair import repair


class DynamicOptimizer(Protocol):
    inst: Instance
    formulation: Formulation
    rng: np.random.Generator
    evaluations: int

    @property
    def population(self) -> Sequence[Solution]: ...

    def rescore(self, formulation: Formulation) -> None: ...

    def adopt_repaired(self, x: Solution) -> None: ...


def previous_best(population: Sequence[Solution], formulation: Formulation, inst: Instance) -> Solution:
    """Highest-profit feasible member; failing that, the member with the best repair key."""
    feasible = [x for x in population if formulation.feasible(x)]
    if feasible:
        return max(feasible, key=lambda x: x.profit)
    return max(population, key=lambda x: repair_key(x, formulation.violation(x), inst))


def on_capacity_change(algo: DynamicOptimizer, new_formulation: Formulation, budget_cap: int) -> int:
    """Re-score everything under the new capacity and repair if nothing stays feasible.

    Re-scoring is free; each repair iteration costs one evaluation and at most
    ``budget_cap`` are spent. Returns the evaluations used.
    """
    start = previous_best(algo.population, algo.formulation, algo.inst)
    algo.rescore(new_formulation)
    if any(new_formulation.feasible(x) for x in algo.population):
        return 0
    fixed, used = repair(start, new_formulation.violation, algo.inst, budget_cap, algo.rng)
    algo.evaluations += used
    algo.adopt_repaired(fixed)
    return used
