"""Command-line front end.

    branchtrees solve    --input problem.json [--solver branch|ordered|general|search]
    branchtrees eval     --input problem.json --tree tree.json
    branchtrees simulate --input problem.json --tree tree.json --iterations N --seed S
    branchtrees compare  --input problem.json
    branchtrees curve    --automaton A2 --points 101
    branchtrees emit     --input problem.json --tree tree.json --format c

Exit status: 0 on success, 2 on invalid input, 1 on internal failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import dp, emit, evaluate, predictor, sim
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
    leaf_range,
    linear_cost,
    to_rational,
)


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class ProblemFile:
    dist: Optional[ItemDistribution]
    sdist: Optional[SearchDistribution]
    model: object
    pair: Optional[StaticCostPair]
    equality_cost: Optional[Fraction]
    thresholds: Optional[list]


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh, parse_float=str)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from exc


def _parse_cost_model(desc):
    if not isinstance(desc, dict):
        raise InputError("cost_model must be an object")
    kind = desc.get("type", "static")
    pair = None
    if "c_mispredict" in desc or "c_predict" in desc:
        if "c_mispredict" not in desc or "c_predict" not in desc:
            raise InputError("give both c_mispredict and c_predict")
        pair = StaticCostPair(desc["c_mispredict"], desc["c_predict"])
    if kind == "static":
        if pair is None:
            raise InputError("static cost model needs c_mispredict and c_predict")
        return StaticModel(pair), pair
    if kind == "dynamic":
        if pair is None:
            raise InputError("dynamic cost model needs c_mispredict and c_predict")
        auto = desc.get("automaton", "A2")
        if isinstance(auto, dict):
            auto = predictor.PredictorAutomaton.from_json(auto)
        elif auto not in predictor.BUILTIN:
            raise InputError(f"unknown automaton {auto!r}")
        return DynamicModel(pair, auto), pair
    if kind == "table":
        funcs = desc.get("functions")
        if not funcs:
            raise InputError("table cost model needs a non-empty 'functions' list")
        table = []
        for k, f in enumerate(funcs, 1):
            try:
                table.append(linear_cost(f.get("name", f"C{k}"), f["left"], f["right"]))
            except (KeyError, AttributeError) as exc:
                raise InputError(f"table function {k} needs 'left' and 'right' coefficients") from exc
        return TableModel(tuple(table)), pair
    raise InputError(f"unknown cost model type {kind!r}")


def load_problem(path) -> ProblemFile:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise InputError("problem file must be a JSON object")
    has_w = "weights" in data
    has_ab = "alpha" in data or "beta" in data
    if has_w == has_ab:
        raise InputError("give exactly one of 'weights' or ('alpha', 'beta')")
    dist = sdist = None
    if has_w:
        dist = build_distribution(data["weights"])
    else:
        sdist = build_search_distribution(data.get("alpha", []), data.get("beta", []))
    model, pair = _parse_cost_model(data.get("cost_model", {}))
    e = data.get("e", data.get("cost_model", {}).get("e"))
    thresholds = data.get("thresholds")
    return ProblemFile(dist, sdist, model, pair,
                       to_rational(e) if e is not None else None, thresholds)


def load_tree(path):
    data = _load_json(path)
    if isinstance(data, dict) and "tree" in data:
        data = data["tree"]
    return emit.tree_from_json(data)


def _fmt(x, as_float):
    if as_float:
        return float(x)
    return str(Fraction(x)) if not isinstance(x, float) else x


def _need_dist(prob):
    if prob.dist is None:
        raise InputError("this command needs 'weights'")
    return prob.dist


def _need_pair(prob):
    if prob.pair is None:
        raise InputError("this command needs a static cost pair (c_mispredict, c_predict)")
    return prob.pair


def solve_problem(prob: ProblemFile, solver: str):
    if solver == "search":
        if prob.sdist is None:
            raise InputError("search solver needs 'alpha' and 'beta'")
        if prob.equality_cost is None:
            raise InputError("search solver needs an equality cost 'e'")
        return dp.solve_search_tree(prob.sdist, _need_pair(prob), prob.equality_cost)
    dist = _need_dist(prob)
    if solver == "branch":
        return dp.solve_branch_optimal(dist, _need_pair(prob))
    if solver == "ordered":
        return dp.solve_ordered_edge(dist, _need_pair(prob))
    if solver == "general":
        return dp.solve_generalized(dist, prob.model)
    raise InputError(f"unknown solver {solver!r}")


def compare_table(dist: ItemDistribution, pair: StaticCostPair) -> list[dict]:
    rows = [
        ("uniform-cost", dp.solve_uniform_cost(dist)),
        ("ordered-edge", dp.solve_ordered_edge(dist, pair)),
        ("branch-optimal", dp.solve_branch_optimal(dist, pair)),
        ("dynamic-A2", dp.solve_generalized(dist, DynamicModel(pair, "A2"))),
        ("dynamic-A3", dp.solve_generalized(dist, DynamicModel(pair, "A3"))),
    ]
    ordered = rows[1][1].normalized_cost
    out = []
    for name, res in rows:
        cost = res.normalized_cost
        row = {"name": name, "normalized_cost": cost}
        if name == "uniform-cost":
            # the comparison-count tree, best-oriented and priced with the real pair
            tree = reorient_static(res.tree, dist)
            row["static_cost"] = evaluate.expected_cost(tree, dist, pair).normalized
            row["ratio_to_ordered"] = row["static_cost"] / ordered
        else:
            row["static_cost"] = evaluate.expected_cost(res.tree, dist, pair).normalized
            row["ratio_to_ordered"] = cost / ordered
        out.append(row)
    return out


def reorient_static(tree, dist):
    """Point every node's prediction at its heavier side (lighter side mispredicted)."""
    if isinstance(tree, Leaf):
        return tree
    i, j = leaf_range(tree)
    s = tree.split
    k = 1 if dist.mass(i, s - 1) <= dist.mass(s, j) else 2
    return Node(s, k, reorient_static(tree.left, dist), reorient_static(tree.right, dist))


# --------------------------------------------------------------------------


def _cmd_solve(args, out):
    prob = load_problem(args.input)
    solver = args.solver or ("search" if prob.sdist is not None else "branch")
    res = solve_problem(prob, solver)
    data = emit.result_to_json(res)
    if args.float:
        for k in ("expected_cost", "total_cost", "total_mass", "equality_cost"):
            if k in data:
                data[k] = float(Fraction(data[k]))
    out.write(emit.dumps(data) + "\n")


def _cmd_eval(args, out):
    prob = load_problem(args.input)
    dist = _need_dist(prob)
    tree = load_tree(args.tree)
    bd = evaluate.expected_cost(tree, dist, prob.model)
    f = args.float
    data = {
        "total": _fmt(bd.total, f),
        "total_mass": _fmt(bd.total_mass, f),
        "expected_cost": _fmt(bd.normalized, f),
        "per_item": {str(i): {"length": l, "path_cost": _fmt(c, f)} for i, (l, c) in sorted(bd.per_item.items())},
        "per_node": {f"{i},{j},{s}": _fmt(c, f) for (i, j, s), c in sorted(bd.per_node.items())},
    }
    out.write(emit.dumps(data) + "\n")


def _cmd_simulate(args, out):
    prob = load_problem(args.input)
    dist = _need_dist(prob)
    tree = load_tree(args.tree)
    auto = args.automaton
    if auto is None:
        auto = prob.model.predictor if isinstance(prob.model, DynamicModel) else "static"
    rep = sim.simulate(tree, dist, auto, _need_pair(prob), args.iterations, args.seed,
                       warmup=args.warmup, replications=args.replications, workers=args.workers)
    out.write(emit.dumps(rep.to_json()) + "\n")


def _cmd_compare(args, out):
    prob = load_problem(args.input)
    rows = compare_table(_need_dist(prob), _need_pair(prob))
    f = args.float
    data = [{k: (_fmt(v, f) if k != "name" else v) for k, v in row.items()} for row in rows]
    out.write(emit.dumps({"rows": data}) + "\n")


def _cmd_curve(args, out):
    kind = args.automaton
    out.write("p1,rate\n")
    for p, r in predictor.mispredict_curve(kind, args.points):
        out.write(f"{float(p)!r},{float(r)!r}\n")


def _cmd_emit(args, out):
    prob = load_problem(args.input)
    tree = load_tree(args.tree)
    names = prob.thresholds
    opts = emit.EmitOptions(format=args.format, hint_style=args.hints, threshold_names=names)
    if args.format == "json":
        out.write(emit.emit_json(tree) + "\n")
    elif args.format == "dot":
        res = dp.SolveResult(tree, Fraction(0), Fraction(1), "", prob.model)
        out.write(emit.emit_dot(tree, res, opts, dist=prob.dist))
    else:
        out.write(emit.emit_code(tree, opts))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="branchtrees", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, tree=False):
        sp = sub.add_parser(name)
        sp.set_defaults(func=fn)
        if name != "curve":
            sp.add_argument("--input", required=True)
        if tree:
            sp.add_argument("--tree", required=True)
        sp.add_argument("--float", action="store_true", help="render rationals as decimals")
        return sp

    sp = add("solve", _cmd_solve)
    sp.add_argument("--solver", choices=["branch", "ordered", "general", "search"])
    add("eval", _cmd_eval, tree=True)
    sp = add("simulate", _cmd_simulate, tree=True)
    sp.add_argument("--iterations", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--warmup", type=int, default=0)
    sp.add_argument("--automaton", choices=["A2", "A3", "static"])
    sp.add_argument("--replications", type=int, default=1)
    sp.add_argument("--workers", type=int, default=1)
    add("compare", _cmd_compare)
    sp = add("curve", _cmd_curve)
    sp.add_argument("--automaton", choices=["A2", "A3", "static"], required=True)
    sp.add_argument("--points", type=int, default=101)
    sp = add("emit", _cmd_emit, tree=True)
    sp.add_argument("--format", choices=["json", "dot", "c"], default="c")
    sp.add_argument("--hints", choices=["macro", "comment", "none"], default="macro")
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        args.func(args, out)
    except (InputError, ModelError) as exc:
        err.write(f"error: {exc}\n")
        return 2
    except Exception as exc:  # noqa: BLE001
        err.write(f"internal error: {exc!r}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
