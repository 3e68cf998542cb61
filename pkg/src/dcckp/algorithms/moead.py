"""MOEA/D with weighted-sum, Tchebycheff and PBI decompositions.

All scalarising functions work on sign-normalised objective vectors (every coordinate
maximised), so the reference point ``z_star`` is the coordinate-wise maximum seen so far.
"""

from __future__ import annotations

import math

import numpy as np

from ..model import Instance, Solution
from ..objectives import Formulation
from .operators import VariationConfig, mutate, uniform_crossover

DECOMPOSITIONS = ("ws", "te", "pbi")
DEFAULT_THETA = 5.0


def dirichlet_weights(N: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """N weight vectors drawn from the flat Dirichlet distribution on the m-simplex."""
    if N < 1:
        raise ValueError(f"need at least one weight vector, got N={N}")
    if m < 2:
        raise ValueError(f"need at least two objectives, got m={m}")
    w = rng.dirichlet(np.ones(m), size=N)
    return w / w.sum(axis=1, keepdims=True)


def neighborhood_size(N: int) -> int:
    return min(N, max(2, math.ceil(0.1 * N)))


def neighborhoods(weights: np.ndarray, T: int) -> np.ndarray:
    """Indices of the T nearest weight vectors (Euclidean) for each sub-problem, self first."""
    N = len(weights)
    if not 1 <= T <= N:
        raise ValueError(f"neighbourhood size {T} outside [1, {N}]")
    d = np.linalg.norm(weights[:, None, :] - weights[None, :, :], axis=2)
    np.fill_diagonal(d, -1.0)
    return np.argsort(d, axis=1, kind="stable")[:, :T]


def _check(F, lam):
    F = np.asarray(F, dtype=float)
    lam = np.asarray(lam, dtype=float)
    if F.shape[-1] != lam.shape[-1]:
        raise ValueError(f"objective dimension {F.shape[-1]} != weight dimension {lam.shape[-1]}")
    return F, lam


def g_ws(F, lam):
    """Weighted sum, to be maximised."""
    F, lam = _check(F, lam)
    return np.sum(lam * F, axis=-1)


def g_te(F, lam, z_star):
    """Weighted Tchebycheff distance to the reference point, to be minimised."""
    F, lam = _check(F, lam)
    return np.max(lam * np.abs(F - np.asarray(z_star, dtype=float)), axis=-1)


def g_pbi(F, lam, z_star, theta=DEFAULT_THETA):
    """Penalty boundary intersection d1 + theta * d2, to be minimised.

    d1 is the distance from z_star along the weight direction, d2 the distance from
    the point ``z_star - d1 * lam / |lam|`` on that line.
    """
    F, lam = _check(F, lam)
    z = np.asarray(z_star, dtype=float)
    norm = np.linalg.norm(lam, axis=-1, keepdims=True)
    if np.any(norm == 0):
        raise ValueError("PBI needs a nonzero weight vector")
    direction = lam / norm
    d1 = np.abs(np.sum((z - F) * direction, axis=-1))
    d2 = np.linalg.norm(F - (z - d1[..., None] * direction), axis=-1)
    return d1 + theta * d2


class Moead:
    """MOEA/D on one formulation. Sub-problems are visited round-robin; each visit
    breeds one offspring (one evaluation) from two distinct neighbours and lets it
    replace every neighbour whose scalarised value it strictly improves."""

    def __init__(
        self,
        inst: Instance,
        formulation: Formulation,
        rng: np.random.Generator,
        pop_size: int,
        decomposition: str = "te",
        theta: float = DEFAULT_THETA,
        variation: VariationConfig = VariationConfig(),
        T: int | None = None,
    ):
        if decomposition not in DECOMPOSITIONS:
            raise ValueError(f"unknown decomposition {decomposition!r}; expected one of {DECOMPOSITIONS}")
        if pop_size < 2:
            raise ValueError(f"population size must be >= 2, got {pop_size}")
        if theta <= 0:
            raise ValueError(f"PBI theta must be positive, got {theta}")
        self.inst = inst
        self.formulation = formulation
        self.rng = rng
        self.decomposition = decomposition
        self.theta = theta
        self.variation = variation
        self.weights = dirichlet_weights(pop_size, formulation.m, rng)
        self.T = neighborhood_size(pop_size) if T is None else T
        self.neighbors = neighborhoods(self.weights, self.T)
        self.population = [Solution.random(inst, rng) for _ in range(pop_size)]
        self.F = np.array([formulation.fitness(x).normalized for x in self.population], dtype=float)
        self.evaluations = pop_size
        self.z_star = self.F.max(axis=0)
        self.next_index = 0
        self.last_index = 0

    @property
    def N(self) -> int:
        return len(self.population)

    def cost(self, F, lam) -> np.ndarray:
        """Scalarised value where lower is better."""
        if self.decomposition == "ws":
            return -g_ws(F, lam)
        if self.decomposition == "te":
            return g_te(F, lam, self.z_star)
        return g_pbi(F, lam, self.z_star, self.theta)

    def step(self) -> int:
        """Advance one sub-problem; returns the number of neighbours replaced."""
        i = self.next_index
        self.next_index = (i + 1) % self.N
        self.last_index = i
        nb = self.neighbors[i]
        a, b = self.rng.choice(nb, size=2, replace=False)
        child = uniform_crossover(
            self.population[a], self.population[b], self.inst, self.rng, self.variation.crossover_prob
        )
        child = mutate(child, self.inst, self.rng, self.variation.rate_for(self.inst.n))
        f = np.asarray(self.formulation.fitness(child).normalized, dtype=float)
        self.evaluations += 1
        self.z_star = np.maximum(self.z_star, f)
        lam = self.weights[nb]
        better = self.cost(f, lam) < self.cost(self.F[nb], lam)
        for j in nb[better]:
            self.population[j] = child
            self.F[j] = f
        return int(better.sum())

    def rescore(self, formulation: Formulation) -> None:
        """Re-evaluate the population under a new context and reset the reference point."""
        self.formulation = formulation
        self.F = np.array([formulation.fitness(x).normalized for x in self.population], dtype=float)
        self.z_star = self.F.max(axis=0)

    def adopt_repaired(self, x: Solution) -> None:
        """Overwrite the most recently selected sub-problem's incumbent."""
        f = np.asarray(self.formulation.fitness(x).normalized, dtype=float)
        self.population[self.last_index] = x
        self.F[self.last_index] = f
        self.z_star = np.maximum(self.z_star, f)


def moead_step(state: Moead) -> int:
    return state.step()
