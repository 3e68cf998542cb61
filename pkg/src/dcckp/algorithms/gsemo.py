"""Global SEMO: a mutation-only EA keeping an archive of mutually non-dominated solutions."""

from __future__ import annotations

import numpy as np

from ..model import Instance, Solution
from ..objectives import Formulation, ObjectiveVector
from .operators import mutate


class GsemoArchive:
    """Non-dominated set keyed by objective vector.

    A newcomer is rejected if some member strongly dominates it. Otherwise it enters and
    every member it weakly dominates leaves, so an identical objective vector is replaced.
    """

    def __init__(self, m: int):
        self.m = m
        self.members: list[Solution] = []
        self.objectives: list[ObjectiveVector] = []
        self._F = np.empty((0, m))

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    @property
    def normalized(self) -> np.ndarray:
        return self._F

    def offer(self, x: Solution, fv: ObjectiveVector) -> bool:
        f = np.asarray(fv.normalized, dtype=float)
        F = self._F
        if len(F):
            ge = F >= f
            if np.any(ge.all(axis=1) & (F > f).any(axis=1)):
                return False
            keep = ~(F <= f).all(axis=1)
            if not keep.all():
                self.members = [s for s, k in zip(self.members, keep) if k]
                self.objectives = [o for o, k in zip(self.objectives, keep) if k]
                F = F[keep]
        self.members.append(x)
        self.objectives.append(fv)
        self._F = np.vstack([F, f])
        return True

    def clear(self):
        self.members, self.objectives = [], []
        self._F = np.empty((0, self.m))


class Gsemo:
    """GSEMO driver. Every evaluated offspring (and the random initial solution) costs
    one unit of ``evaluations``."""

    def __init__(
        self,
        inst: Instance,
        formulation: Formulation,
        rng: np.random.Generator,
        initial: Solution | None = None,
    ):
        self.inst = inst
        self.formulation = formulation
        self.rng = rng
        self.archive = GsemoArchive(formulation.m)
        self.evaluations = 0
        if initial is None:
            initial = Solution.random(inst, rng)
        self.archive.offer(initial, formulation.fitness(initial))
        self.evaluations += 1

    @property
    def population(self) -> list[Solution]:
        return self.archive.members

    def step(self) -> bool:
        members = self.archive.members
        parent = members[self.rng.integers(len(members))]
        y = mutate(parent, self.inst, self.rng)
        self.evaluations += 1
        return self.archive.offer(y, self.formulation.fitness(y))

    def rescore(self, formulation: Formulation) -> None:
        """Switch to a new context and rebuild the archive from re-scored members."""
        self.formulation = formulation
        old = self.archive.members
        self.archive.clear()
        for x in old:
            self.archive.offer(x, formulation.fitness(x))

    def adopt_repaired(self, x: Solution) -> None:
        """Restart the search from a single (repaired) solution."""
        self.archive.clear()
        self.archive.offer(x, self.formulation.fitness(x))


def gsemo_step(algo: Gsemo) -> bool:
    return algo.step()
