from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from branchtrees.dp import solve_branch_optimal
from branchtrees.evaluate import (
    brute_force_optimal,
    count_trees,
    expected_cost,
    outcome_words,
    path_cost,
)
from branchtrees.model import DynamicModel, Leaf, ModelError, Node, StaticCostPair, build_distribution

from conftest import distributions, pairs

FIG1 = Node(2, 1, Leaf(1), Node(3, 1, Leaf(2), Node(4, 1, Leaf(3), Leaf(4))))
COMPLETE = Node(3, 1, Node(2, 1, Leaf(1), Leaf(2)), Node(4, 1, Leaf(3), Leaf(4)))
P31 = StaticCostPair(3, 1)


@pytest.mark.parametrize("word, cost", [((2, 2), 2), ((1,), 3), ((1, 2), 4), ((), 0)])
def test_path_cost(word, cost):
    assert path_cost(word, P31) == cost


def test_path_cost_rejects_bad_outcome():
    with pytest.raises(ModelError):
        path_cost((3,), P31)


@given(st.lists(st.sampled_from([1, 2])), st.lists(st.sampled_from([1, 2])), pairs())
def test_path_cost_additive(a, b, pair):
    assert path_cost(a + b, pair) == path_cost(a, pair) + path_cost(b, pair)


def test_fig1_and_complete(uniform4):
    assert expected_cost(FIG1, uniform4, P31).normalized == Fraction(15, 4)
    assert expected_cost(COMPLETE, uniform4, P31).normalized == 4


def test_breakdown_fields(uniform4):
    bd = expected_cost(FIG1, uniform4, P31)
    assert bd.per_item[1] == (1, 3)
    assert bd.per_item[4] == (3, 3)
    assert outcome_words(FIG1)[3] == (2, 2, 1)
    assert sum(bd.per_node.values()) == bd.total == 15
    assert bd.per_node[1, 4, 2] == 6


def test_leaf_only_tree():
    d = build_distribution([4])
    assert expected_cost(Leaf(1), d, P31).total == 0


def test_size_mismatch(uniform4):
    with pytest.raises(ModelError):
        expected_cost(Node(2, 1, Leaf(1), Leaf(2)), uniform4, P31)


def test_dynamic_per_item_paths():
    d = build_distribution([1, 3])
    bd = expected_cost(Node(2, 1, Leaf(1), Leaf(2)), d, DynamicModel(P31, "A2"))
    assert bd.total == Fraction(32, 5)
    assert bd.per_item[1] == (1, Fraction(8, 5))


@given(distributions(min_n=1, max_n=6), pairs(), st.builds(Fraction, st.integers(1, 9), st.integers(1, 4)))
def test_normalization(dist, pair, lam):
    tree = solve_branch_optimal(dist, pair).tree
    assert expected_cost(tree, dist.scaled(lam), pair).total == lam * expected_cost(tree, dist, pair).total


def test_brute_force_two_items():
    d = build_distribution([2, 5])
    pair = StaticCostPair(7, 3)
    assert brute_force_optimal(d, pair).total_cost == min(7 * 2 + 3 * 5, 3 * 2 + 7 * 5)


def test_brute_force_skewed(skewed4):
    assert brute_force_optimal(skewed4, P31).total_cost == Fraction(18, 5)


def test_brute_force_limit():
    with pytest.raises(ModelError, match="exceeds brute-force limit"):
        brute_force_optimal(build_distribution([1] * 11), P31)


def test_search_space_size():
    assert count_trees(4, 2) == 5 * 8
    assert count_trees(10, 2) == 4862 * 512


@settings(max_examples=30, deadline=None)
@given(distributions(max_n=5), pairs())
def test_brute_force_dynamic_tree_is_oriented(dist, pair):
    res = brute_force_optimal(dist, DynamicModel(pair, "A3"))
    assert expected_cost(res.tree, dist, res.model).total == res.total_cost
