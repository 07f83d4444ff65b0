"""Optimal alphabetic decision trees and search trees under branch-prediction-aware costs."""
from .dp import (
    SolveResult,
    solve_branch_optimal,
    solve_generalized,
    solve_ordered_edge,
    solve_search_tree,
    solve_uniform_cost,
)
from .evaluate import brute_force_optimal, expected_cost, path_cost, search_tree_cost
from .model import (
    DynamicModel,
    ItemDistribution,
    Leaf,
    ModelError,
    Node,
    SearchDistribution,
    StaticCostPair,
    StaticModel,
    TableModel,
    build_distribution,
    build_search_distribution,
    mass,
)
from .predictor import A2, A3, PredictorAutomaton, rate_a2, rate_a3, static_rate, stationary_rate
from .sim import simulate

__version__ = "0.1.0"
