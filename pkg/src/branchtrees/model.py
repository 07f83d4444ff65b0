"""Core data types: item distributions, cost models and comparison trees.

Weights are kept unnormalized. Every cost in the package is homogeneous of
degree one in mass, so a cost divided by ``total`` is the per-unit (probability)
figure.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate
from numbers import Rational
from typing import Callable, Sequence, Union

Number = Union[Fraction, float]


class ModelError(ValueError):
    """Invalid distribution, cost model or tree."""


def to_rational(value) -> Fraction:
    """Parse an int, Fraction, decimal string or ``"p/q"`` string exactly.

    Floats go through their shortest repr, so ``0.3`` becomes ``3/10``.
    """
    if isinstance(value, bool):
        raise ModelError(f"not a number: {value!r}")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ModelError(f"not a rational: {value!r}") from exc
    raise ModelError(f"not a number: {value!r}")


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


# --------------------------------------------------------------------------
# distributions


@dataclass(frozen=True)
class ItemDistribution:
    """Nonnegative weights for items ``1..n`` with O(1) range masses."""

    weights: tuple[Fraction, ...]
    _prefix: tuple[Fraction, ...] = field(repr=False, compare=False)

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def total(self) -> Fraction:
        return self._prefix[-1]

    def weight(self, i: int) -> Fraction:
        return self.weights[i - 1]

    def mass(self, i: int, j: int) -> Fraction:
        """Sum of weights of items ``i..j`` (1-based, inclusive)."""
        if not 1 <= i <= j <= self.n:
            raise ModelError(f"range ({i}, {j}) outside 1..{self.n}")
        return self._prefix[j] - self._prefix[i - 1]

    def scaled(self, factor) -> "ItemDistribution":
        factor = to_rational(factor)
        return build_distribution([w * factor for w in self.weights])


def build_distribution(weights: Sequence) -> ItemDistribution:
    values = tuple(to_rational(w) for w in weights)
    if not values:
        raise ModelError("empty distribution")
    if any(w < 0 for w in values):
        raise ModelError("negative weight")
    prefix = (Fraction(0), *accumulate(values))
    if prefix[-1] == 0:
        raise ModelError("zero total mass")
    return ItemDistribution(values, prefix)


def mass(dist: ItemDistribution, i: int, j: int) -> Fraction:
    return dist.mass(i, j)


@dataclass(frozen=True)
class SearchDistribution:
    """Three-way search model: ``alpha[0..n']`` miss gaps, ``beta[1..n']`` key hits.

    ``beta`` is stored 0-based; ``beta_at(s)`` reads key ``s``.
    """

    alpha: tuple[Fraction, ...]
    beta: tuple[Fraction, ...]
    _prefix: tuple[Fraction, ...] = field(repr=False, compare=False)

    @property
    def n_keys(self) -> int:
        return len(self.beta)

    @property
    def total(self) -> Fraction:
        return self._prefix[-1]

    def beta_at(self, s: int) -> Fraction:
        return self.beta[s - 1]

    def mass(self, i: int, j: int) -> Fraction:
        """alpha_i + sum over k in (i, j] of (beta_k + alpha_k)."""
        if not 0 <= i <= j <= self.n_keys:
            raise ModelError(f"boundary range ({i}, {j}) outside 0..{self.n_keys}")
        # _prefix[k] = alpha_0 + sum_{t<=k}(beta_t + alpha_t); mass(i,j) drops the prefix before alpha_i
        return self._prefix[j] - self._prefix[i] + self.alpha[i]

    def as_items(self) -> ItemDistribution:
        """The alphabetic problem obtained when every beta is zero (item i+1 is gap i)."""
        if any(self.beta):
            raise ModelError("alphabetic reduction needs all beta = 0")
        return build_distribution(self.alpha)


def build_search_distribution(alpha: Sequence, beta: Sequence) -> SearchDistribution:
    a = tuple(to_rational(x) for x in alpha)
    b = tuple(to_rational(x) for x in beta)
    if not b:
        raise ModelError("search distribution needs at least one key")
    if len(a) != len(b) + 1:
        raise ModelError(f"expected {len(b) + 1} alpha entries, got {len(a)}")
    if any(x < 0 for x in a + b):
        raise ModelError("negative probability")
    prefix = [a[0]]
    for k in range(1, len(a)):
        prefix.append(prefix[-1] + b[k - 1] + a[k])
    if prefix[-1] == 0:
        raise ModelError("zero total mass")
    return SearchDistribution(a, b, tuple(prefix))


# --------------------------------------------------------------------------
# trees


@dataclass(frozen=True)
class Leaf:
    item: int


@dataclass(frozen=True)
class Node:
    """Comparison ``x < threshold(split)``: items before ``split`` go left.

    ``choice`` indexes the branch cost function used at this node. For the
    static pair, 1 charges the mispredict cost to the left side and 2 to the
    right side, i.e. the predicted (majority) side is right for 1, left for 2.
    """

    split: int
    choice: int
    left: "DecisionTree"
    right: "DecisionTree"


DecisionTree = Union[Leaf, Node]


def leaf_range(tree: DecisionTree) -> tuple[int, int]:
    """Check contiguity and return the covered item range ``(i, j)``."""
    if isinstance(tree, Leaf):
        return tree.item, tree.item
    li, lj = leaf_range(tree.left)
    ri, rj = leaf_range(tree.right)
    if lj + 1 != ri or ri != tree.split:
        raise ModelError(f"node split {tree.split} inconsistent with children {li}..{lj} / {ri}..{rj}")
    return li, rj


def internal_nodes(tree: DecisionTree):
    """Yield ``(i, j, node)`` in preorder."""
    stack = [tree]
    while stack:
        t = stack.pop()
        if isinstance(t, Node):
            i, j = leaf_range(t)
            yield i, j, t
            stack.append(t.right)
            stack.append(t.left)


@dataclass(frozen=True)
class Gap:
    index: int


@dataclass(frozen=True)
class SearchNode:
    """Three-way node over boundary range (i, j): equality with key ``key``,
    then gaps/keys below the key go left, the rest go right."""

    key: int
    choice: int
    left: "SearchTree"
    right: "SearchTree"


SearchTree = Union[Gap, SearchNode]


def gap_range(tree: SearchTree) -> tuple[int, int]:
    if isinstance(tree, Gap):
        return tree.index, tree.index
    li, lj = gap_range(tree.left)
    ri, rj = gap_range(tree.right)
    if lj != tree.key - 1 or ri != tree.key:
        raise ModelError(f"search node key {tree.key} inconsistent with children")
    return li, rj


# --------------------------------------------------------------------------
# cost models


@dataclass(frozen=True)
class StaticCostPair:
    c_mispredict: Fraction
    c_predict: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c_mispredict", to_rational(self.c_mispredict))
        object.__setattr__(self, "c_predict", to_rational(self.c_predict))
        if self.c_mispredict <= 0 or self.c_predict <= 0:
            raise ModelError("branch costs must be positive")

    def side_costs(self, choice: int) -> tuple[Fraction, Fraction]:
        """(left edge cost, right edge cost) for orientation ``choice``."""
        if choice == 1:
            return self.c_mispredict, self.c_predict
        if choice == 2:
            return self.c_predict, self.c_mispredict
        raise ModelError(f"static choice must be 1 or 2, got {choice}")


# signature: (left mass, right mass, i, j, s) -> cost
CostFn = Callable[[Fraction, Fraction, int, int, int], Number]


@dataclass(frozen=True)
class BranchCostFunction:
    name: str
    fn: CostFn

    def __call__(self, p_left, p_right, i, j, s):
        return self.fn(p_left, p_right, i, j, s)


def linear_cost(name: str, left, right) -> BranchCostFunction:
    """``left * p' + right * p''``."""
    a, b = to_rational(left), to_rational(right)
    return BranchCostFunction(name, lambda pl, pr, i, j, s: a * pl + b * pr)


@dataclass(frozen=True)
class StaticModel:
    pair: StaticCostPair
    kind = "static"

    @property
    def num_choices(self) -> int:
        return 2

    def cost(self, k, p_left, p_right, i, j, s):
        cl, cr = self.pair.side_costs(k)
        return cl * p_left + cr * p_right

    def choice_for(self, k, p_left, p_right) -> int:
        return k


@dataclass(frozen=True)
class DynamicModel:
    """Per-branch adaptive predictor; orientation does not change the cost.

    ``predictor`` is ``"A2"``, ``"A3"`` or a ``PredictorAutomaton``.
    """

    pair: StaticCostPair
    predictor: object = "A2"
    kind = "dynamic"

    @property
    def num_choices(self) -> int:
        return 1

    def cost(self, k, p_left, p_right, i, j, s):
        from .predictor import branch_cost_dynamic

        return branch_cost_dynamic(self.pair, self.predictor, min(p_left, p_right), max(p_left, p_right))

    def choice_for(self, k, p_left, p_right) -> int:
        # recorded as an initial-bias hint: the lighter side is the taken/mispredicted one
        return 1 if p_left <= p_right else 2


@dataclass(frozen=True)
class TableModel:
    functions: tuple[BranchCostFunction, ...]
    kind = "table"

    def __post_init__(self):
        object.__setattr__(self, "functions", tuple(self.functions))
        if not self.functions:
            raise ModelError("table cost model needs at least one function")

    @property
    def num_choices(self) -> int:
        return len(self.functions)

    def cost(self, k, p_left, p_right, i, j, s):
        c = self.functions[k - 1](p_left, p_right, i, j, s)
        if c < 0:
            raise ModelError(f"cost function {self.functions[k - 1].name!r} returned {c}")
        return c

    def choice_for(self, k, p_left, p_right) -> int:
        return k


CostModel = Union[StaticModel, DynamicModel, TableModel]


def as_model(model_or_pair) -> CostModel:
    if isinstance(model_or_pair, StaticCostPair):
        return StaticModel(model_or_pair)
    return model_or_pair


def static_as_table(pair: StaticCostPair) -> TableModel:
    """The m=2 encoding of a static pair (c1 on left, c1 on right)."""
    return TableModel((
        linear_cost("c1-left", pair.c_mispredict, pair.c_predict),
        linear_cost("c1-right", pair.c_predict, pair.c_mispredict),
    ))
