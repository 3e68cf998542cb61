"""Evolutionary multi-objective optimisation of the dynamic chance-constrained knapsack."""

from .dynamics import DynamicSchedule, build_schedule, capacity_at_change
from .evaluation import EvaluationRecord, ProfitOracle, RunResult, aggregate, dp_optimum, offline_error
from .model import Instance, Solution, flip_bit, generate_instance, load_instance, save_instance
from .objectives import Formulation2D, Formulation3D, ObjectiveVector, dominates
from .stochastic import AlphaProfile, chance_weight, k_alpha, w_alpha_max

__version__ = "0.1.0"
