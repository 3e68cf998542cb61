"""Normal quantiles and the deterministic surrogate of the chance constraint.

For independent normal item weights, ``Pr(w(x) <= B) >= alpha`` holds exactly when
``mu(x) + K_alpha * sqrt(v(x)) <= B`` with ``K_alpha`` the standard normal quantile.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from .model import Instance, Solution

DEFAULT_ALPHA_GRID = (1 - 1e-2, 1 - 1e-4, 1 - 1e-6, 1 - 1e-8, 1 - 1e-10)

# Wichura's AS 241 (PPND16) coefficients, ~1e-16 relative accuracy.
_A = (
    3.3871328727963666080e0, 1.3314166789178437745e2, 1.9715909503065514427e3,
    1.3731693765509461125e4, 4.5921953931549871457e4, 6.7265770927008700853e4,
    3.3430575583588128105e4, 2.5090809287301226727e3,
)
_B = (
    1.0, 4.2313330701600911252e1, 6.8718700749205790830e2, 5.3941960214247511077e3,
    2.1213794301586595867e4, 3.9307895800092710610e4, 2.8729085735721942674e4,
    5.2264952788528545610e3,
)
_C = (
    1.42343711074968357734e0, 4.63033784615654529590e0, 5.76949722146069140550e0,
    3.64784832476320460504e0, 1.27045825245236838258e0, 2.41780725177450611770e-1,
    2.27238449892691845833e-2, 7.74545014278341407640e-4,
)
_D = (
    1.0, 2.05319162663775882187e0, 1.67638483018380384940e0, 6.89767334985100004550e-1,
    1.48103976427480074590e-1, 1.51986665636164571966e-2, 5.47593808499534494600e-4,
    1.05075007164441684324e-9,
)
_E = (
    6.65790464350110377720e0, 5.46378491116411436990e0, 1.78482653991729133580e0,
    2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
    2.71155556874348757815e-5, 2.01033439929228813265e-7,
)
_F = (
    1.0, 5.99832206555887937690e-1, 1.36929880922735805310e-1, 1.48753612908506148525e-2,
    7.86869131145613259100e-4, 1.84631831751005468180e-5, 1.42151175831644588870e-7,
    2.04426310338993978564e-15,
)


def _poly(coef, x):
    acc = 0.0
    for c in reversed(coef):
        acc = acc * x + c
    return acc


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


@lru_cache(maxsize=256)
def k_alpha(alpha: float) -> float:
    """Standard normal quantile Phi^-1(alpha) for 0 < alpha < 1."""
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"K_alpha is only finite for 0 < alpha < 1, got {alpha}")
    q = alpha - 0.5
    if abs(q) <= 0.425:
        r = 0.180625 - q * q
        return q * _poly(_A, r) / _poly(_B, r)
    r = alpha if q < 0 else 1.0 - alpha
    r = math.sqrt(-math.log(r))
    if r <= 5.0:
        r -= 1.6
        val = _poly(_C, r) / _poly(_D, r)
    else:
        r -= 5.0
        val = _poly(_E, r) / _poly(_F, r)
    return -val if q < 0 else val


def surrogate_weight(mean: float, var: float, k: float) -> float:
    return mean + k * math.sqrt(var)


def chance_weight(sol: Solution, alpha: float) -> float:
    """w_alpha(x) = mu(x) + K_alpha * sqrt(v(x))."""
    return sol.mean_weight + k_alpha(alpha) * math.sqrt(sol.var_weight)


def w_alpha_max(inst: Instance, alpha: float) -> float:
    """Upper bound on w_alpha over every solution of ``inst`` (alpha >= 1/2)."""
    n = inst.n
    return inst.mu_max * n + k_alpha(alpha) * math.sqrt(inst.v_max * n)


@dataclass(frozen=True)
class AlphaProfile:
    alpha_low: float = DEFAULT_ALPHA_GRID[0]
    alpha_high: float = DEFAULT_ALPHA_GRID[-1]
    grid: tuple[float, ...] = field(default=DEFAULT_ALPHA_GRID)

    def __post_init__(self):
        object.__setattr__(self, "grid", tuple(float(a) for a in self.grid))
        if not 0.5 < self.alpha_low <= self.alpha_high < 1.0:
            raise ValueError(
                f"need 1/2 < alpha_low <= alpha_high < 1, got [{self.alpha_low}, {self.alpha_high}]"
            )
        if not self.grid:
            raise ValueError("alpha grid is empty")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValueError("alpha grid must be strictly ascending")
        if self.grid[0] < self.alpha_low or self.grid[-1] > self.alpha_high:
            raise ValueError("alpha grid must lie inside [alpha_low, alpha_high]")

    @classmethod
    def from_grid(cls, grid) -> AlphaProfile:
        grid = tuple(grid)
        return cls(grid[0], grid[-1], grid)
