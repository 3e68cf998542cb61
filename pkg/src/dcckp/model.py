"""Knapsack instances with normally distributed item weights, and bit-string solutions."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

PROFIT_RANGE = 1000
BSC_OFFSET = PROFIT_RANGE // 10

INSTANCE_CLASSES = ("uncorr", "bsc")
VARIANCE_REGIMES = ("V1", "V2")


class InstanceFormatError(ValueError):
    """Raised when an instance file cannot be parsed."""


def _as_int_array(values: Iterable[int], name: str) -> np.ndarray:
    arr = np.array(values, dtype=np.int64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Instance:
    """n items with integer profits, mean weights and weight variances."""

    profits: np.ndarray
    means: np.ndarray
    variances: np.ndarray

    def __post_init__(self):
        for name in ("profits", "means", "variances"):
            object.__setattr__(self, name, _as_int_array(getattr(self, name), name))
        n = len(self.profits)
        if n == 0:
            raise ValueError("an instance needs at least one item")
        if len(self.means) != n or len(self.variances) != n:
            raise ValueError("profits, means and variances must have the same length")
        for name in ("profits", "means", "variances"):
            if np.any(getattr(self, name) < 1):
                raise ValueError(f"all {name} must be >= 1")

    @property
    def n(self) -> int:
        return len(self.profits)

    @property
    def p_max(self) -> int:
        return int(self.profits.max())

    @property
    def mu_max(self) -> int:
        return int(self.means.max())

    @property
    def v_max(self) -> int:
        return int(self.variances.max())

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            np.array_equal(self.profits, other.profits)
            and np.array_equal(self.means, other.means)
            and np.array_equal(self.variances, other.variances)
        )

    __hash__ = None

    def __repr__(self):
        return f"Instance(n={self.n}, p_max={self.p_max}, mu_max={self.mu_max}, v_max={self.v_max})"


class Solution:
    """A bit string with cached profit, expected weight and weight variance.

    Solutions are values: operations return new objects and ``bits`` is read-only.
    """

    __slots__ = ("bits", "profit", "mean_weight", "var_weight")

    def __init__(self, bits: np.ndarray, profit: int, mean_weight: int, var_weight: int):
        bits.flags.writeable = False
        self.bits = bits
        self.profit = profit
        self.mean_weight = mean_weight
        self.var_weight = var_weight

    @classmethod
    def empty(cls, n: int) -> Solution:
        return cls(np.zeros(n, dtype=bool), 0, 0, 0)

    @classmethod
    def from_bits(cls, bits: Sequence[bool] | np.ndarray, inst: Instance) -> Solution:
        bits = np.array(bits, dtype=bool)
        if bits.shape != (inst.n,):
            raise ValueError(f"expected {inst.n} bits, got shape {bits.shape}")
        return cls(
            bits,
            int(inst.profits[bits].sum()),
            int(inst.means[bits].sum()),
            int(inst.variances[bits].sum()),
        )

    @classmethod
    def random(cls, inst: Instance, rng: np.random.Generator) -> Solution:
        return cls.from_bits(rng.random(inst.n) < 0.5, inst)

    @property
    def n(self) -> int:
        return len(self.bits)

    def with_flips(self, idx: np.ndarray, inst: Instance) -> Solution:
        """Toggle every index in ``idx`` (distinct) and patch the aggregates."""
        bits = self.bits.copy()
        if len(idx) == 0:
            return Solution(bits, self.profit, self.mean_weight, self.var_weight)
        # +1 for bits being switched on, -1 for bits being switched off
        sign = np.where(bits[idx], -1, 1)
        bits[idx] = ~bits[idx]
        return Solution(
            bits,
            self.profit + int(sign @ inst.profits[idx]),
            self.mean_weight + int(sign @ inst.means[idx]),
            self.var_weight + int(sign @ inst.variances[idx]),
        )

    def __eq__(self, other):
        if not isinstance(other, Solution):
            return NotImplemented
        return (
            self.profit == other.profit
            and self.mean_weight == other.mean_weight
            and self.var_weight == other.var_weight
            and np.array_equal(self.bits, other.bits)
        )

    def __hash__(self):
        return hash(self.bits.tobytes())

    def __repr__(self):
        ones = "".join("1" if b else "0" for b in self.bits[:32])
        more = "..." if self.n > 32 else ""
        return f"Solution({ones}{more}, p={self.profit}, mu={self.mean_weight}, v={self.var_weight})"


def flip_bit(sol: Solution, i: int, inst: Instance) -> Solution:
    if not 0 <= i < sol.n:
        raise IndexError(f"bit index {i} out of range for n={sol.n}")
    return sol.with_flips(np.array([i]), inst)


def draw_variances(means: np.ndarray, regime: str, rng: np.random.Generator) -> np.ndarray:
    """Integer variances: V1 uniform on [1, mu_i], V2 uniform on [mu_i^2, 2 mu_i^2]."""
    means = np.asarray(means, dtype=np.int64)
    if regime == "V1":
        return rng.integers(1, means, endpoint=True)
    if regime == "V2":
        sq = means * means
        return rng.integers(sq, 2 * sq, endpoint=True)
    raise ValueError(f"unknown variance regime {regime!r}; expected one of {VARIANCE_REGIMES}")


def generate_instance(cls: str, n: int, regime: str, seed: int) -> Instance:
    """Regenerate an uncorrelated or bounded strongly correlated instance."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if cls not in INSTANCE_CLASSES:
        raise ValueError(f"unknown instance class {cls!r}; expected one of {INSTANCE_CLASSES}")
    if regime not in VARIANCE_REGIMES:
        raise ValueError(f"unknown variance regime {regime!r}; expected one of {VARIANCE_REGIMES}")
    rng = np.random.default_rng(seed)
    means = rng.integers(1, PROFIT_RANGE, size=n, endpoint=True)
    if cls == "uncorr":
        profits = rng.integers(1, PROFIT_RANGE, size=n, endpoint=True)
    else:
        profits = means + BSC_OFFSET
    variances = draw_variances(means, regime, rng)
    return Instance(profits, means, variances)


def save_instance(inst: Instance, path: str | os.PathLike) -> None:
    lines = [str(inst.n)]
    lines += [f"{p} {m} {v}" for p, m, v in zip(inst.profits, inst.means, inst.variances)]
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def load_instance(path: str | os.PathLike) -> Instance:
    """Read the text format: ``n`` on the first line, then ``p_i mu_i v_i`` per item."""
    with open(path, encoding="ascii") as fh:
        lines = [(no, ln.strip()) for no, ln in enumerate(fh, start=1)]
    lines = [(no, ln) for no, ln in lines if ln]
    if not lines:
        raise InstanceFormatError(f"{path}: empty file")
    head_no, head = lines[0]
    try:
        n = int(head)
    except ValueError:
        raise InstanceFormatError(f"{path}:{head_no}: expected item count, got {head!r}") from None
    if n < 1:
        raise InstanceFormatError(f"{path}:{head_no}: item count must be >= 1")
    items = lines[1:]
    if len(items) != n:
        raise InstanceFormatError(f"{path}: header says {n} items but found {len(items)} item lines")
    rows = []
    for no, ln in items:
        parts = ln.split()
        if len(parts) != 3:
            raise InstanceFormatError(f"{path}:{no}: expected 3 fields, got {len(parts)}")
        try:
            row = [int(x) for x in parts]
        except ValueError:
            raise InstanceFormatError(f"{path}:{no}: non-integer field in {ln!r}") from None
        if min(row) < 1:
            raise InstanceFormatError(f"{path}:{no}: values must be positive, got {ln!r}")
        rows.append(row)
    arr = np.array(rows, dtype=np.int64)
    return Instance(arr[:, 0], arr[:, 1], arr[:, 2])
