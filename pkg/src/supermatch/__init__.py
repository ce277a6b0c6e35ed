"""Robustness of stable matchings: (1,b)-supermatch verification and search."""
from ._kernels import BACKEND
from .instance import Instance, generate_instance, load_instance, parse_instance, validate
from .matching import Matching, blocking_pairs, distance, man_optimal, woman_optimal
from .robustness import RepairResult, RobustnessReport, is_one_b_supermatch, man_repair, robustness
from .rotations import (
    ClosedSubset,
    Rotation,
    RotationPoset,
    closed_subset_of_matching,
    enumerate_closed_subsets,
    matching_of_closed_subset,
    rotation_poset,
)
from .solvers import SolverConfig, SolveOutcome, exact_most_robust, genetic_algorithm, local_search

__version__ = "0.1.0"
