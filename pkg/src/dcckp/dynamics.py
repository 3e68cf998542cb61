"""Random-walk capacity schedules: nu changes drawn from U(-r, r), one every t evaluations."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

logger = logging.getLogger(__name__)

CAPACITY_FLOOR = 0.0


@dataclass(frozen=True, eq=False)
class DynamicSchedule:
    initial_capacity: float
    magnitudes: np.ndarray
    capacities: np.ndarray
    r: float
    t: int
    nu: int
    eta: float
    seed: int | None = None
    floor: float = CAPACITY_FLOOR

    def __eq__(self, other):
        if not isinstance(other, DynamicSchedule):
            return NotImplemented
        return (
            (self.initial_capacity, self.r, self.t, self.nu, self.eta, self.seed, self.floor)
            == (other.initial_capacity, other.r, other.t, other.nu, other.eta, other.seed, other.floor)
            and np.array_equal(self.magnitudes, other.magnitudes)
            and np.array_equal(self.capacities, other.capacities)
        )

    __hash__ = None

    @property
    def clamp_count(self) -> int:
        raw = self.capacities[:-1] + self.magnitudes
        return int(np.count_nonzero(raw < self.floor))

    def with_period(self, t: int) -> DynamicSchedule:
        """Same capacity sequence, different number of evaluations between changes."""
        return schedule_from_magnitudes(
            self.initial_capacity, self.r, t, self.magnitudes, eta=self.eta, seed=self.seed, floor=self.floor
        )


def _accumulate(b0: float, magnitudes: np.ndarray, floor: float) -> np.ndarray:
    caps = np.empty(len(magnitudes) + 1)
    caps[0] = b0
    for k, step in enumerate(magnitudes):
        nxt = caps[k] + step
        if nxt < floor:
            logger.debug("capacity change %d clamped: %.3f -> %.3f", k + 1, nxt, floor)
            nxt = floor
        caps[k + 1] = nxt
    return caps


def schedule_from_magnitudes(
    b0: float,
    r: float,
    t: int,
    magnitudes: Sequence[float],
    eta: float | None = None,
    seed: int | None = None,
    floor: float = CAPACITY_FLOOR,
) -> DynamicSchedule:
    if r <= 0:
        raise ValueError(f"change magnitude bound r must be positive, got {r}")
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    if b0 < 0:
        raise ValueError(f"initial capacity must be nonnegative, got {b0}")
    mags = np.array(magnitudes, dtype=float)
    if mags.ndim != 1 or len(mags) < 1:
        raise ValueError("need at least one capacity change")
    if np.any(np.abs(mags) > r):
        raise ValueError("every change magnitude must lie in [-r, r]")
    eta = float(r) if eta is None else float(eta)
    if eta < 0:
        raise ValueError(f"eta must be nonnegative, got {eta}")
    mags.flags.writeable = False
    caps = _accumulate(float(b0), mags, floor)
    caps.flags.writeable = False
    sched = DynamicSchedule(float(b0), mags, caps, float(r), int(t), len(mags), eta, seed, floor)
    if sched.clamp_count:
        logger.info("capacity clamped at %.1f on %d of %d changes", floor, sched.clamp_count, sched.nu)
    return sched


def build_schedule(
    b0: float | None, r: float, t: int, nu: int, seed: int, eta: float | None = None
) -> DynamicSchedule:
    """Draw ``nu`` i.i.d. magnitudes from U(-r, r). ``b0`` defaults to 2r, ``eta`` to r."""
    if r <= 0:
        raise ValueError(f"change magnitude bound r must be positive, got {r}")
    if nu < 1:
        raise ValueError(f"nu must be >= 1, got {nu}")
    rng = np.random.default_rng(seed)
    mags = rng.uniform(-r, r, size=nu)
    b0 = 2.0 * r if b0 is None else b0
    return schedule_from_magnitudes(b0, r, t, mags, eta=eta, seed=seed)


def capacity_at_change(s: DynamicSchedule, k: int) -> float:
    if not 0 <= k <= s.nu:
        raise IndexError(f"change index {k} outside [0, {s.nu}]")
    return float(s.capacities[k])


def save_schedule(s: DynamicSchedule, path: str | os.PathLike) -> None:
    seed = "-" if s.seed is None else str(s.seed)
    lines = [f"{s.initial_capacity!r} {s.r!r} {s.t} {s.nu} {s.eta!r} {seed}"]
    lines += [repr(float(m)) for m in s.magnitudes]
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def load_schedule(path: str | os.PathLike) -> DynamicSchedule:
    with open(path, encoding="ascii") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty schedule file")
    head = lines[0].split()
    if len(head) != 6:
        raise ValueError(f"{path}:1: expected header 'B0 r t nu eta seed', got {lines[0]!r}")
    b0, r, t, nu, eta = float(head[0]), float(head[1]), int(head[2]), int(head[3]), float(head[4])
    seed = None if head[5] == "-" else int(head[5])
    mags = [float(x) for x in lines[1:]]
    if len(mags) != nu:
        raise ValueError(f"{path}: header says nu={nu} but found {len(mags)} magnitudes")
    return schedule_from_magnitudes(b0, r, t, mags, eta=eta, seed=seed)
