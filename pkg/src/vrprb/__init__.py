"""Bi-objective VRP with route balancing: seven balance objectives, a (1+1) EA
with a Pareto archive, hypervolume evaluation and Welch-test scoring."""

from .construct import random_initial_solution, split_giant_tour, to_giant_tour
from .ea import EaConfig, Mutation, ParetoArchive, archive_insert, run_ea
from .metrics import archive_hypervolume, hypervolume_2d, normalize, reevaluate_max_min, reference_point
from .model import Instance, Solution, distance, route_length, route_load, total_distance
from .objectives import ALL_OBJECTIVES, BalanceObjective, ObjectiveVector, dominates, evaluate_balance, objective_vector
from .stats import build_histogram, pairwise_scores, welch_t_test

__version__ = "0.1.0"
