"""(1+1)-EA repair on the penalised profit, run when no stored solution survives a change."""

from __future__ import annotations

from typing import Callable

import numpy as np

from ..model import Instance, Solution
from ..objectives import repair_key
from .operators import mutate


def repair(
    start: Solution,
    violation_fn: Callable[[Solution], float],
    inst: Instance,
    budget_cap: int,
    rng: np.random.Generator,
) -> tuple[Solution, int]:
    """Mutate and keep the offspring whenever it is no worse, until the violation is zero
    or ``budget_cap`` offspring have been evaluated.

    Returns the final solution (possibly still infeasible) and the evaluations used.
    """
    x = start
    h = violation_fn(x)
    key = repair_key(x, h, inst)
    used = 0
    while h > 0 and used < budget_cap:
        y = mutate(x, inst, rng)
        used += 1
        hy = violation_fn(y)
        ky = repair_key(y, hy, inst)
        if ky >= key:
            x, h, key = y, hy, ky
    return x, used
