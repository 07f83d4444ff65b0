"""Exact tree evaluation and an exhaustive optimal-tree oracle."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .dp import SolveResult
from .model import (
    DecisionTree,
    Gap,
    ItemDistribution,
    Leaf,
    ModelError,
    Node,
    SearchDistribution,
    SearchTree,
    StaticCostPair,
    StaticModel,
    as_model,
    gap_range,
    leaf_range,
    to_rational,
)

MISPREDICTED, PREDICTED = 1, 2


def path_cost(word: Sequence[int], pair: StaticCostPair) -> Fraction:
    """Cost of a root-to-leaf path given as outcomes (1 = mispredicted, 2 = predicted)."""
    total = Fraction(0)
    for b in word:
        if b == MISPREDICTED:
            total += pair.c_mispredict
        elif b == PREDICTED:
            total += pair.c_predict
        else:
            raise ModelError(f"outcome must be 1 or 2, got {b!r}")
    return total


def outcome_words(tree: DecisionTree) -> dict[int, tuple[int, ...]]:
    """Static-prediction outcome word for each item, per the nodes' recorded choices."""
    words = {}

    def walk(t, prefix):
        if isinstance(t, Leaf):
            words[t.item] = prefix
            return
        # choice 1: c1 on the left, i.e. going left is the mispredicted outcome
        left_miss = t.choice == 1
        walk(t.left, prefix + ((MISPREDICTED if left_miss else PREDICTED),))
        walk(t.right, prefix + ((PREDICTED if left_miss else MISPREDICTED),))

    walk(tree, ())
    return words


@dataclass(frozen=True)
class CostBreakdown:
    total: Fraction
    total_mass: Fraction
    per_item: dict        # item -> (path length, path cost per visit)
    per_node: dict        # (i, j, s) -> contribution

    @property
    def normalized(self):
        return self.total / self.total_mass


def _check_cover(tree: DecisionTree, dist: ItemDistribution):
    i, j = leaf_range(tree)
    if (i, j) != (1, dist.n):
        raise ModelError(f"tree covers items {i}..{j}, distribution has 1..{dist.n}")


def expected_cost(tree: DecisionTree, dist: ItemDistribution, model) -> CostBreakdown:
    """Expected cost of ``tree``; ``model`` is a cost model or a bare static pair.

    Static models are summed item by item from the outcome words; the per-node
    contributions are computed separately and must agree.
    """
    model = as_model(model)
    _check_cover(tree, dist)
    per_node = {}
    per_item = {}

    def walk(t, i, j, depth, acc):
        if isinstance(t, Leaf):
            per_item[t.item] = (depth, acc)
            return
        s = t.split
        pl, pr = dist.mass(i, s - 1), dist.mass(s, j)
        c = model.cost(t.choice if model.num_choices > 1 else 1, pl, pr, i, j, s)
        per_node[i, j, s] = c
        visit = c / (pl + pr) if pl + pr else 0 * c
        walk(t.left, i, s - 1, depth + 1, acc + visit)
        walk(t.right, s, j, depth + 1, acc + visit)

    walk(tree, 1, dist.n, 0, Fraction(0))

    if isinstance(model, StaticModel):
        for item, word in outcome_words(tree).items():
            per_item[item] = (len(word), path_cost(word, model.pair))
        total = sum((dist.weight(i) * per_item[i][1] for i in per_item), Fraction(0))
        if total != sum(per_node.values(), Fraction(0)):
            raise AssertionError("path and node sums disagree")
    else:
        total = sum(per_node.values(), Fraction(0))
    return CostBreakdown(total, dist.total, per_item, per_node)


def search_tree_cost(tree: SearchTree, sdist: SearchDistribution, pair: StaticCostPair, e) -> Fraction:
    """Expected cost of a three-way search tree under static prediction."""
    e = to_rational(e)
    if gap_range(tree) != (0, sdist.n_keys):
        raise ModelError("search tree does not cover the distribution")

    # (outcome probability, cost paid) enumerated per gap and per key
    def walk(t, i, j, acc):
        if isinstance(t, Gap):
            return sdist.alpha[t.index] * acc
        s = t.key
        cl, cr = pair.side_costs(t.choice)
        hit = sdist.beta_at(s) * (acc + e)
        return hit + walk(t.left, i, s - 1, acc + cl) + walk(t.right, s, j, acc + cr)

    return walk(tree, 0, sdist.n_keys, Fraction(0))


# --------------------------------------------------------------------------
# brute force


def _all_trees(i, j, choices, memo):
    """Every alphabetic tree over items i..j with every choice assignment."""
    key = (i, j)
    if key in memo:
        return memo[key]
    if i == j:
        out = [Leaf(i)]
    else:
        out = []
        for s in range(i + 1, j + 1):
            for left in _all_trees(i, s - 1, choices, memo):
                for right in _all_trees(s, j, choices, memo):
                    for k in choices:
                        out.append(Node(s, k, left, right))
    memo[key] = out
    return out


def _catalan(n):
    from math import comb

    return comb(2 * n, n) // (n + 1)


def brute_force_optimal(dist: ItemDistribution, model, limit: int = 10) -> SolveResult:
    """Exhaustive minimum over all tree shapes and per-node choices.

    Subtree costs are priced independently of the DP, straight from the
    model's node cost, and the winning tree is re-checked with ``expected_cost``.
    Choices that cannot change the cost (dynamic predictors) are collapsed.
    """
    model = as_model(model)
    n = dist.n
    if n > limit:
        raise ModelError(f"n={n} exceeds brute-force limit {limit}")
    choices = tuple(range(1, model.num_choices + 1))
    m = dist.mass
    best_cost, best_tree = None, None

    # pricing memo keyed by subtree identity; subtrees are shared objects
    priced: dict[int, Fraction] = {}

    def price(t, i, j):
        if isinstance(t, Leaf):
            return 0
        tid = id(t)
        if tid not in priced:
            s = t.split
            priced[tid] = (model.cost(t.choice, m(i, s - 1), m(s, j), i, j, s)
                           + price(t.left, i, s - 1) + price(t.right, s, j))
        return priced[tid]

    memo: dict = {}
    if n == 1:
        best_cost, best_tree = Fraction(0), Leaf(1)
    else:
        for s in range(2, n + 1):
            lefts = _all_trees(1, s - 1, choices, memo)
            rights = _all_trees(s, n, choices, memo)
            lc = [price(t, 1, s - 1) for t in lefts]
            rc = [price(t, s, n) for t in rights]
            for k in choices:
                root = model.cost(k, m(1, s - 1), m(s, n), 1, n, s)
                for a, ca in zip(lefts, lc):
                    for b, cb in zip(rights, rc):
                        c = root + ca + cb
                        if best_cost is None or c < best_cost:
                            best_cost, best_tree = c, Node(s, k, a, b)
    if model.num_choices == 1:
        best_tree = _reorient(best_tree, dist, model)
    check = expected_cost(best_tree, dist, model).total
    if check != best_cost:
        raise AssertionError(f"brute-force pricing {best_cost} != evaluation {check}")
    return SolveResult(best_tree, Fraction(best_cost), dist.total, "brute", model)


def _reorient(tree, dist, model):
    if isinstance(tree, Leaf):
        return tree
    i, j = leaf_range(tree)
    s = tree.split
    k = model.choice_for(tree.choice, dist.mass(i, s - 1), dist.mass(s, j))
    return Node(s, k, _reorient(tree.left, dist, model), _reorient(tree.right, dist, model))


def count_trees(n: int, num_choices: int) -> int:
    """Size of the brute-force search space."""
    return _catalan(n - 1) * num_choices ** (n - 1)
