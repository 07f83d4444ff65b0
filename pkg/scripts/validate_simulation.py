"""Monte Carlo check of analytic costs and per-node stationary misprediction rates."""
import argparse

from branchtrees import DynamicModel, StaticCostPair, build_distribution, expected_cost, solve_generalized, simulate
from branchtrees.model import internal_nodes
from branchtrees.predictor import stationary_rate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--weights", default="1,6,15,20,15,6,1")
    ap.add_argument("--c1", default="11")
    ap.add_argument("--c2", default="2")
    ap.add_argument("--automaton", default="A2", choices=["A2", "A3"])
    ap.add_argument("--iterations", type=int, default=10**6)
    ap.add_argument("--warmup", type=int, default=10**4)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    dist = build_distribution(args.weights.split(","))
    pair = StaticCostPair(args.c1, args.c2)
    model = DynamicModel(pair, args.automaton)
    res = solve_generalized(dist, model)
    rep = simulate(res.tree, dist, args.automaton, pair, args.iterations, args.seed, warmup=args.warmup)
    print(f"analytic {float(res.normalized_cost):.6f}  simulated {rep.mean_cost:.6f} +- {rep.std_error:.6f}")
    print(f"{'node (i,j,s)':<14}{'p1':>10}{'analytic':>12}{'empirical':>12}")
    for i, j, node in internal_nodes(res.tree):
        a, b = dist.mass(i, node.split - 1), dist.mass(node.split, j)
        if a + b == 0:
            continue
        p1 = min(a, b) / (a + b)
        st = rep.per_node[i, j, node.split]
        print(f"{str((i, j, node.split)):<14}{float(p1):>10.4f}"
              f"{float(stationary_rate(args.automaton, p1)):>12.5f}{st.rate:>12.5f}")
    static = expected_cost(res.tree, dist, pair).normalized
    print(f"same tree under static prediction: {float(static):.6f}")


if __name__ == "__main__":
    main()
