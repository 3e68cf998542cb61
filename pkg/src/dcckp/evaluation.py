"""Partial offline error against the deterministic (mean-weight) knapsack optimum."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .model import Instance, Solution
from .stochastic import k_alpha

DEFAULT_MAX_CAPACITY = 50_000_000


class CapacityTooLarge(MemoryError):
    """The DP table for the requested capacity exceeds the configured cell cap."""


def _profit_table(inst: Instance, capacity: int) -> np.ndarray:
    # best[c] = max profit with total mean weight <= c
    best = np.zeros(capacity + 1, dtype=np.int64)
    for p, w in zip(inst.profits.tolist(), inst.means.tolist()):
        if w <= capacity:
            best[w:] = np.maximum(best[w:], best[: capacity + 1 - w] + p)
    return best


def _floor_capacity(B: float, max_capacity: int) -> int:
    if B < 0:
        raise ValueError(f"capacity must be nonnegative, got {B}")
    cap = math.floor(B)
    if cap > max_capacity:
        raise CapacityTooLarge(
            f"floor(B) = {cap} exceeds the DP cap of {max_capacity} cells; use a smaller capacity walk"
        )
    return cap


def dp_optimum(inst: Instance, B: float, max_capacity: int = DEFAULT_MAX_CAPACITY) -> int:
    """max sum p_i x_i subject to sum mu_i x_i <= floor(B)."""
    cap = _floor_capacity(B, max_capacity)
    return int(_profit_table(inst, cap)[cap])


class ProfitOracle:
    """Memoised dp_optimum for one instance. One table answers every capacity up to its
    size; it is rebuilt larger on demand."""

    def __init__(self, inst: Instance, max_capacity: int = DEFAULT_MAX_CAPACITY):
        self.inst = inst
        self.max_capacity = max_capacity
        self._table = np.zeros(1, dtype=np.int64)
        self._total_mean = int(inst.means.sum())
        self._total_profit = int(inst.profits.sum())

    def __call__(self, B: float) -> int:
        cap = math.floor(B) if B >= 0 else -1
        if cap >= self._total_mean:
            return self._total_profit
        cap = _floor_capacity(B, self.max_capacity)
        if cap >= len(self._table):
            grown = min(2 * (len(self._table) - 1), self.max_capacity, self._total_mean)
            self._table = _profit_table(self.inst, max(cap, grown))
        return int(self._table[cap])


@dataclass(frozen=True)
class EvaluationRecord:
    change_index: int
    alpha: float
    p_star: int
    e_i: float
    best_profit: int | None = None
    min_violation: float | None = None

    def __post_init__(self):
        if (self.best_profit is None) == (self.min_violation is None):
            raise ValueError("exactly one of best_profit and min_violation must be set")

    @property
    def feasible(self) -> bool:
        return self.best_profit is not None


def offline_error(
    inst: Instance,
    B: float,
    alpha: float,
    population: Sequence[Solution],
    p_star: int | None = None,
    change_index: int = 0,
) -> EvaluationRecord:
    """e_i = P* - best feasible profit, or P* + min(w_alpha(x) - B) if nothing is feasible.

    Feasibility here is the plain chance constraint w_alpha(x) <= B, without the eta band.
    """
    if not population:
        raise ValueError("cannot evaluate an empty population")
    if p_star is None:
        p_star = dp_optimum(inst, B)
    k = k_alpha(alpha)
    best = None
    min_excess = math.inf
    for x in population:
        excess = x.mean_weight + k * math.sqrt(x.var_weight) - B
        if excess <= 0:
            if best is None or x.profit > best:
                best = x.profit
        elif excess < min_excess:
            min_excess = excess
    if best is not None:
        return EvaluationRecord(change_index, alpha, p_star, float(p_star - best), best_profit=best)
    return EvaluationRecord(change_index, alpha, p_star, p_star + min_excess, min_violation=min_excess)


def best_feasible_per_alpha(
    population: Sequence[Solution], B: float, alphas: Sequence[float]
) -> dict[float, Solution | None]:
    """For each alpha, the highest-profit member with w_alpha(x) <= B (None if there is none)."""
    out = {}
    for a in alphas:
        k = k_alpha(a)
        ok = [x for x in population if x.mean_weight + k * math.sqrt(x.var_weight) <= B]
        out[a] = max(ok, key=lambda x: x.profit) if ok else None
    return out


@dataclass
class RunResult:
    records: dict[float, list[EvaluationRecord]]
    E: dict[float, float]
    metadata: dict = field(default_factory=dict)

    @property
    def alphas(self) -> list[float]:
        return sorted(self.records)


def aggregate(
    records: Mapping[float, Sequence[EvaluationRecord]], nu: int | None = None, metadata: dict | None = None
) -> RunResult:
    """Total partial offline error E = (sum of e_i) / nu for each alpha."""
    if not records:
        raise ValueError("no records to aggregate")
    out, E = {}, {}
    for alpha, recs in records.items():
        recs = sorted(recs, key=lambda r: r.change_index)
        if nu is not None and len(recs) != nu:
            raise ValueError(f"alpha={alpha}: expected {nu} records, got {len(recs)}")
        if not recs:
            raise ValueError(f"alpha={alpha}: no records")
        out[alpha] = recs
        E[alpha] = math.fsum(r.e_i for r in recs) / len(recs)
    return RunResult(out, E, dict(metadata or {}))
