from fractions import Fraction

import pytest

from branchtrees.dp import solve_branch_optimal
from branchtrees.evaluate import expected_cost
from branchtrees.model import Leaf, ModelError, Node, StaticCostPair, build_distribution
from branchtrees.predictor import A3, rate_a2, stationary_rate
from branchtrees.sim import merge_reports, sample_items, simulate

import numpy as np

P31 = StaticCostPair(3, 1)
FIG1 = Node(2, 1, Leaf(1), Node(3, 1, Leaf(2), Node(4, 1, Leaf(3), Leaf(4))))
ONE = Node(2, 1, Leaf(1), Leaf(2))


def test_sampling_frequencies():
    d = build_distribution(["1/6", "1/3", "1/2"])
    items = sample_items(d, 60000, np.random.default_rng(3))
    freq = np.bincount(items, minlength=4)[1:] / len(items)
    assert np.allclose(freq, [1 / 6, 1 / 3, 1 / 2], atol=0.01)
    assert items.min() >= 1 and items.max() <= 3


def test_zero_weight_never_drawn():
    d = build_distribution([1, 0, 1])
    items = sample_items(d, 10000, np.random.default_rng(0))
    assert not (items == 2).any()


def test_static_matches_evaluation():
    d = build_distribution([1, 1, 1, 1])
    rep = simulate(FIG1, d, "static", P31, 200_000, seed=1)
    exact = float(expected_cost(FIG1, d, P31).normalized)
    assert abs(rep.mean_cost - exact) < 3 * rep.std_error + 1e-9
    assert rep.per_node[1, 4, 2].visits == 200_000


def test_visit_invariants():
    d = build_distribution([3, 1, 4, 1, 5])
    tree = solve_branch_optimal(d, P31).tree
    rep = simulate(tree, d, "A2", P31, 20_000, seed=5, warmup=100)
    root = (1, 5, tree.split)
    assert rep.per_node[root].visits == 20_000

    def check(t, i, j):
        if isinstance(t, Leaf):
            return
        v = rep.per_node[i, j, t.split].visits
        kids = [rep.per_node[a, b, c.split].visits for c, a, b in
                ((t.left, i, t.split - 1), (t.right, t.split, j)) if isinstance(c, Node)]
        assert sum(kids) <= v
        for st in rep.per_node.values():
            assert 0 <= st.rate <= 1
        check(t.left, i, t.split - 1)
        check(t.right, t.split, j)

    check(tree, 1, 5)


def test_dynamic_rate_converges():
    d = build_distribution([1, 4])
    rep = simulate(ONE, d, A3, P31, 200_000, seed=11, warmup=500)
    p1 = Fraction(1, 5)
    target = float(stationary_rate(A3, p1))
    st = rep.per_node[1, 2, 2]
    se = (target * (1 - target) / st.visits) ** 0.5
    # autocorrelated outcomes; allow a generous multiple of the i.i.d. error
    assert abs(st.rate - target) < 10 * se


def test_determinism_and_seed_sensitivity():
    d = build_distribution([1, 3])
    a = simulate(ONE, d, "A2", P31, 5000, seed=42, warmup=10)
    b = simulate(ONE, d, "A2", P31, 5000, seed=42, warmup=10)
    c = simulate(ONE, d, "A2", P31, 5000, seed=43, warmup=10)
    assert a == b and a.to_json() == b.to_json()
    assert a.to_json() != c.to_json()


def test_replications_merge_order_free():
    d = build_distribution([2, 1, 1])
    tree = solve_branch_optimal(d, P31).tree
    rep = simulate(tree, d, "A2", P31, 9000, seed=9, replications=3)
    assert rep.iterations == 9000
    parts = [simulate(tree, d, "A2", P31, 100 * k, seed=k) for k in (1, 2, 3)]
    m1 = merge_reports(parts)
    m2 = merge_reports(parts[::-1])
    assert m1.total_cost == m2.total_cost and m1.per_node == m2.per_node
    assert merge_reports([m1, parts[0]]) == merge_reports([parts[0], m1])


def test_parallel_replications_match_serial():
    d = build_distribution([1, 3])
    a = simulate(ONE, d, "A2", P31, 4000, seed=4, replications=2)
    b = simulate(ONE, d, "A2", P31, 4000, seed=4, replications=2, workers=2)
    assert a == b


def test_variance_exact_for_deterministic_costs():
    # static single node: cost is 3 with prob 1/4 and 1 otherwise
    d = build_distribution([1, 3])
    rep = simulate(ONE, d, "static", P31, 50_000, seed=2)
    assert rep.variance == pytest.approx(0.75, abs=0.03)


@pytest.mark.parametrize("kwargs", [
    dict(iterations=0, seed=1),
    dict(iterations=10, seed=1, warmup=10),
    dict(iterations=10, seed=1, replications=0),
])
def test_bad_arguments(kwargs):
    with pytest.raises(ModelError):
        simulate(ONE, build_distribution([1, 1]), "A2", P31, **kwargs)


def test_mismatched_tree():
    with pytest.raises(ModelError):
        simulate(ONE, build_distribution([1, 1, 1]), "A2", P31, 10, seed=1)


def test_a2_rate_on_quarter_branch():
    rep = simulate(ONE, build_distribution([1, 3]), "A2", P31, 100_000, seed=8, warmup=100)
    assert abs(rep.per_node[1, 2, 2].rate - float(rate_a2(Fraction(1, 4)))) < 0.01
