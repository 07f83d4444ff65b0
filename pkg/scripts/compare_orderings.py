"""Ordered-edge vs unordered-edge optimal trees on the binomial instance,
plus the dynamic-predictor optima and the uniform-cost tree."""
import argparse
from fractions import Fraction

from branchtrees import StaticCostPair, build_distribution
from branchtrees.cli import compare_table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--weights", default="1,6,15,20,15,6,1")
    ap.add_argument("--c1", default="11")
    ap.add_argument("--c2", default="2")
    args = ap.parse_args()
    dist = build_distribution(args.weights.split(","))
    pair = StaticCostPair(args.c1, args.c2)
    print(f"{'tree':<16}{'own cost':>14}{'':>12}{'static cost':>14}{'vs ordered':>12}")
    for row in compare_table(dist, pair):
        c = Fraction(row["normalized_cost"])
        print(f"{row['name']:<16}{str(c):>14}{float(c):>12.6f}"
              f"{float(row['static_cost']):>14.6f}{float(row['ratio_to_ordered']):>12.4f}")


if __name__ == "__main__":
    main()
