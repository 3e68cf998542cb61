from .dynamic import on_capacity_change, previous_best
from .gsemo import Gsemo, GsemoArchive, gsemo_step
from .moead import (
    DECOMPOSITIONS,
    Moead,
    dirichlet_weights,
    g_pbi,
    g_te,
    g_ws,
    moead_step,
    neighborhood_size,
    neighborhoods,
)
from .operators import VariationConfig, mutate, uniform_crossover
from .repair import repair

__all__ = [
    "DECOMPOSITIONS",
    "Gsemo",
    "GsemoArchive",
    "Moead",
    "VariationConfig",
    "dirichlet_weights",
    "g_pbi",
    "g_te",
    "g_ws",
    "gsemo_step",
    "moead_step",
    "mutate",
    "neighborhood_size",
    "neighborhoods",
    "on_capacity_change",
    "previous_best",
    "repair",
    "uniform_crossover",
]
