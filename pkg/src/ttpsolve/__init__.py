"""Bi-objective travelling thief solver toolkit.

An exact Pareto-front dynamic program for the fixed-tour packing problem
drives an indicator-based evolutionary algorithm over TSP tours, with a
benchmark CLI for desk-scale experiment protocols.
"""

from .instance_io import Instance, Item, parse_instance, serialize_instance, distance, validate
from .tours import make_tour, tour_length, inver_over, two_opt_mutate, jump_mutate, crossover
from .pwt_dp import DpFront, dp_front, brute_force_front, evaluate, best_reward
from .fronts import Surface, pareto_filter, surface, hypervolume, indicator
from .evolve import IbeaConfig, run_ibea

__all__ = [
    "Instance", "Item", "parse_instance", "serialize_instance", "distance", "validate",
    "make_tour", "tour_length", "inver_over", "two_opt_mutate", "jump_mutate", "crossover",
    "DpFront", "dp_front", "brute_force_front", "evaluate", "best_reward",
    "Surface", "pareto_filter", "surface", "hypervolume", "indicator",
    "IbeaConfig", "run_ibea",
]

__version__ = "0.1.0"
