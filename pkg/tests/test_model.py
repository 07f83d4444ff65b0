from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from branchtrees.model import (
    Leaf,
    ModelError,
    Node,
    StaticCostPair,
    build_distribution,
    build_search_distribution,
    leaf_range,
    mass,
    to_rational,
)

from conftest import distributions


def test_build_distribution_examples():
    d = build_distribution(["3/10", "2/10", "2/10", "3/10"])
    assert d.n == 4 and d.total == 1
    b = build_distribution([1, 6, 15, 20, 15, 6, 1])
    assert b.n == 7 and b.total == 64


@pytest.mark.parametrize("weights, msg", [
    ([], "empty distribution"),
    ([1, -1], "negative"),
    ([0, 0], "zero total"),
])
def test_build_distribution_errors(weights, msg):
    with pytest.raises(ModelError, match=msg):
        build_distribution(weights)


def test_rational_parsing():
    assert to_rational("0.3") == Fraction(3, 10)
    assert to_rational("7/4") == Fraction(7, 4)
    assert to_rational(0.3) == Fraction(3, 10)
    assert to_rational(5) == 5
    with pytest.raises(ModelError):
        to_rational("abc")
    with pytest.raises(ModelError):
        to_rational(True)


def test_mass_examples(skewed4):
    assert mass(skewed4, 1, 4) == 1
    assert mass(skewed4, 2, 4) == Fraction(7, 10)
    assert mass(skewed4, 2, 2) == Fraction(1, 5)
    with pytest.raises(ModelError):
        mass(skewed4, 0, 2)
    with pytest.raises(ModelError):
        mass(skewed4, 3, 2)


@given(distributions(min_n=2), st.data())
def test_mass_additivity(dist, data):
    i = data.draw(st.integers(1, dist.n - 1))
    j = data.draw(st.integers(i + 1, dist.n))
    s = data.draw(st.integers(i + 1, j))
    assert dist.mass(i, j) == dist.mass(i, s - 1) + dist.mass(s, j)
    assert dist.mass(i, j) == sum(dist.weights[i - 1:j])


@given(st.lists(st.builds(Fraction, st.integers(0, 9), st.integers(1, 5)), min_size=2, max_size=8), st.data())
def test_search_mass_additivity(values, data):
    alpha, beta = values[: len(values) // 2 + 1], values[len(values) // 2 + 1:]
    if len(alpha) != len(beta) + 1:
        alpha = alpha[: len(beta) + 1]
    if not beta or sum(alpha) + sum(beta) == 0:
        return
    sd = build_search_distribution(alpha, beta)
    i = data.draw(st.integers(0, sd.n_keys - 1))
    j = data.draw(st.integers(i + 1, sd.n_keys))
    s = data.draw(st.integers(i + 1, j))
    assert sd.mass(i, i) == alpha[i]
    assert sd.mass(i, j) == sd.mass(i, s - 1) + sd.beta_at(s) + sd.mass(s, j)


def test_search_distribution_validation():
    with pytest.raises(ModelError):
        build_search_distribution([1, 1], [])
    with pytest.raises(ModelError):
        build_search_distribution([1], [1])
    sd = build_search_distribution([0, 0, 0], ["1/2", "1/2"])
    assert sd.total == 1


def test_static_pair_positive():
    with pytest.raises(ModelError):
        StaticCostPair(0, 1)
    assert StaticCostPair("3", 1).side_costs(2) == (1, 3)


def test_leaf_range_checks_contiguity():
    good = Node(2, 1, Leaf(1), Node(3, 2, Leaf(2), Leaf(3)))
    assert leaf_range(good) == (1, 3)
    with pytest.raises(ModelError):
        leaf_range(Node(3, 1, Leaf(1), Leaf(2)))
    with pytest.raises(ModelError):
        leaf_range(Node(2, 1, Leaf(1), Leaf(3)))
