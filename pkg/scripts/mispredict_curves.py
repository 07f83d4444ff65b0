"""Static vs A2 vs A3 stationary misprediction rates over p1 in [0, 1/2].

Writes one CSV per predictor and prints the worst-case ratio to static.
"""
import argparse
import csv
from pathlib import Path

from branchtrees.predictor import mispredict_curve, worst_case_ratio


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=201)
    ap.add_argument("--out", default="curves")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(exist_ok=True)
    for kind in ("static", "A2", "A3"):
        with open(out / f"{kind}.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["p1", "rate"])
            for p, r in mispredict_curve(kind, args.points):
                w.writerow([float(p), float(r)])
        if kind != "static":
            p, ratio = worst_case_ratio(kind)
            print(f"{kind}: max rate/p1 = {ratio:.6f} at p1 = {p:.6f} ({100 * (ratio - 1):.2f}% worse than static)")
    print(f"wrote {out}/static.csv, A2.csv, A3.csv")


if __name__ == "__main__":
    main()
