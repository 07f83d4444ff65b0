"""Dynamic-programming solvers for optimal alphabetic and search trees.

All solvers run the plain O(m n^3) interval DP. Knuth-style split-point
monotonicity does not hold once edge costs may swap sides, so the split range
is never narrowed.

Ties are broken by the first strict improvement while scanning splits in
ascending order and, for each split, cost-function indices in ascending order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .model import (
    CostModel,
    DecisionTree,
    Gap,
    ItemDistribution,
    Leaf,
    Node,
    SearchDistribution,
    SearchNode,
    SearchTree,
    StaticCostPair,
    StaticModel,
    TableModel,
    linear_cost,
    to_rational,
    ModelError,
)


@dataclass(frozen=True)
class DPTable:
    cost: dict
    split: dict
    choice: dict


@dataclass(frozen=True)
class SolveResult:
    tree: Union[DecisionTree, SearchTree]
    total_cost: Fraction
    total_mass: Fraction
    solver: str = ""
    model: Optional[CostModel] = field(default=None, compare=False)
    table: Optional[DPTable] = field(default=None, compare=False, repr=False)
    equality_cost: Optional[Fraction] = None

    @property
    def normalized_cost(self):
        return self.total_cost / self.total_mass


def _interval_dp(n, lo, node_cost, choices):
    """Generic interval DP over boundaries ``lo..n``.

    ``node_cost(k, i, j, s)`` prices the root of range (i, j) split at s; the
    subranges are (i, s-1) and (s, j) with ``s`` in ``(i, j]``.
    """
    cost, split, choice = {}, {}, {}
    for i in range(lo, n + 1):
        cost[i, i] = 0
    for length in range(1, n - lo + 1):
        for i in range(lo, n - length + 1):
            j = i + length
            best = None
            for s in range(i + 1, j + 1):
                sub = cost[i, s - 1] + cost[s, j]
                for k in choices:
                    c = node_cost(k, i, j, s) + sub
                    if best is None or c < best:
                        best, split[i, j], choice[i, j] = c, s, k
            cost[i, j] = best
    return DPTable(cost, split, choice)


def _build(table: DPTable, i: int, j: int, dist: ItemDistribution, model) -> DecisionTree:
    if i == j:
        return Leaf(i)
    s, k = table.split[i, j], table.choice[i, j]
    k = model.choice_for(k, dist.mass(i, s - 1), dist.mass(s, j))
    return Node(s, k, _build(table, i, s - 1, dist, model), _build(table, s, j, dist, model))


def _solve_items(dist: ItemDistribution, model, choices, solver: str) -> SolveResult:
    m = dist.mass

    def node_cost(k, i, j, s):
        return model.cost(k, m(i, s - 1), m(s, j), i, j, s)

    table = _interval_dp(dist.n, 1, node_cost, choices)
    tree = _build(table, 1, dist.n, dist, model)
    return SolveResult(tree, table.cost[1, dist.n] + Fraction(0), dist.total, solver, model, table)


def solve_branch_optimal(dist: ItemDistribution, pair: StaticCostPair) -> SolveResult:
    """Optimal tree when each node may put the expensive edge on either side."""
    return _solve_items(dist, StaticModel(pair), (1, 2), "branch")


def solve_ordered_edge(dist: ItemDistribution, pair: StaticCostPair) -> SolveResult:
    """Baseline with the left edge always costing ``c_mispredict``."""
    return _solve_items(dist, StaticModel(pair), (1,), "ordered")


def solve_uniform_cost(dist: ItemDistribution) -> SolveResult:
    """Minimum expected number of comparisons (every edge costs 1)."""
    return _solve_items(dist, StaticModel(StaticCostPair(1, 1)), (1,), "uniform")


def solve_generalized(dist: ItemDistribution, model: CostModel) -> SolveResult:
    """Minimise over splits and the model's cost functions ``C_1..C_m``."""
    if isinstance(model, StaticCostPair):
        model = StaticModel(model)
    choices = tuple(range(1, model.num_choices + 1))
    return _solve_items(dist, model, choices, "general")


def table_model(*coefficients) -> TableModel:
    """Convenience: a table of linear cost functions from ``(left, right)`` pairs."""
    return TableModel(tuple(linear_cost(f"C{k}", a, b) for k, (a, b) in enumerate(coefficients, 1)))


def solve_search_tree(sdist: SearchDistribution, pair: StaticCostPair, e) -> SolveResult:
    """Optimal three-way search tree with equality cost ``e`` (static prediction)."""
    e = to_rational(e)
    if e <= 0:
        raise ModelError("equality cost must be positive")
    m = sdist.mass

    def node_cost(k, i, j, s):
        cl, cr = pair.side_costs(k)
        return cl * m(i, s - 1) + cr * m(s, j) + e * sdist.beta_at(s)

    n = sdist.n_keys
    table = _interval_dp(n, 0, node_cost, (1, 2))

    def build(i, j) -> SearchTree:
        if i == j:
            return Gap(i)
        s = table.split[i, j]
        return SearchNode(s, table.choice[i, j], build(i, s - 1), build(s, j))

    return SolveResult(build(0, n), table.cost[0, n] + Fraction(0), sdist.total, "search",
                       StaticModel(pair), table, e)
