"""Output formats: canonical JSON, Graphviz DOT and C-like nested if/else code."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .dp import SolveResult
from .model import (
    DecisionTree,
    DynamicModel,
    Gap,
    ItemDistribution,
    Leaf,
    ModelError,
    Node,
    SearchNode,
    SearchTree,
    StaticModel,
    gap_range,
    leaf_range,
    to_rational,
)


@dataclass(frozen=True)
class EmitOptions:
    format: str = "c"
    hint_style: str = "macro"          # macro | comment | none
    threshold_names: Optional[Sequence[str]] = None
    require_names: bool = False
    variable: str = "x"

    def __post_init__(self):
        if self.format not in ("json", "dot", "c"):
            raise ModelError(f"unknown format {self.format!r}")
        if self.hint_style not in ("macro", "comment", "none"):
            raise ModelError(f"unknown hint style {self.hint_style!r}")


# --------------------------------------------------------------------------
# JSON


def tree_to_json(tree) -> dict:
    if isinstance(tree, Leaf):
        return {"type": "leaf", "item": tree.item}
    if isinstance(tree, Node):
        return {"type": "node", "split": tree.split, "choice": tree.choice,
                "left": tree_to_json(tree.left), "right": tree_to_json(tree.right)}
    if isinstance(tree, Gap):
        return {"type": "gap", "index": tree.index}
    if isinstance(tree, SearchNode):
        return {"type": "search_node", "key": tree.key, "choice": tree.choice,
                "left": tree_to_json(tree.left), "right": tree_to_json(tree.right)}
    raise ModelError(f"not a tree: {tree!r}")


def tree_from_json(data) -> Union[DecisionTree, SearchTree]:
    try:
        kind = data["type"]
        if kind == "leaf":
            return Leaf(int(data["item"]))
        if kind == "node":
            return Node(int(data["split"]), int(data["choice"]),
                        tree_from_json(data["left"]), tree_from_json(data["right"]))
        if kind == "gap":
            return Gap(int(data["index"]))
        if kind == "search_node":
            return SearchNode(int(data["key"]), int(data["choice"]),
                              tree_from_json(data["left"]), tree_from_json(data["right"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"malformed tree JSON: {exc}") from exc
    raise ModelError(f"unknown tree node type {kind!r}")


def result_to_json(result: SolveResult) -> dict:
    out = {
        "solver": result.solver,
        "expected_cost": str(Fraction(result.normalized_cost)),
        "total_cost": str(Fraction(result.total_cost)),
        "total_mass": str(result.total_mass),
        "tree": tree_to_json(result.tree),
    }
    if result.equality_cost is not None:
        out["equality_cost"] = str(result.equality_cost)
    return out


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def emit_json(tree, result: Optional[SolveResult] = None) -> str:
    """Canonical JSON (sorted keys, compact). With a result, costs are "p/q" strings."""
    if result is None:
        return dumps(tree_to_json(tree))
    if result.tree != tree:
        raise ModelError("tree does not belong to the given result")
    return dumps(result_to_json(result))


def parse_json(text: str):
    """Inverse of ``emit_json``: returns a tree, or ``(tree, fields)`` for a result."""
    data = json.loads(text)
    if "tree" in data:
        fields = {k: to_rational(v) for k, v in data.items()
                  if k in ("expected_cost", "total_cost", "total_mass", "equality_cost")}
        fields["solver"] = data.get("solver", "")
        return tree_from_json(data["tree"]), fields
    return tree_from_json(data)


# --------------------------------------------------------------------------
# DOT


def _edge_labels(node, model, dist, i, j):
    if isinstance(model, StaticModel):
        cl, cr = model.pair.side_costs(node.choice)
        a = "mispredicted" if node.choice == 1 else "predicted"
        b = "predicted" if node.choice == 1 else "mispredicted"
        return f"{cl} {a}", f"{cr} {b}"
    if isinstance(model, DynamicModel) and dist is not None:
        from .predictor import rate_function

        s = node.split
        pl, pr = dist.mass(i, s - 1), dist.mass(s, j)
        if pl + pr == 0:
            return "unreached", "unreached"
        f = rate_function(model.predictor)(min(pl, pr) / (pl + pr))
        per_visit = model.pair.c_mispredict * f + model.pair.c_predict * (1 - f)
        return f"{Fraction(per_visit)} expected", f"{Fraction(per_visit)} expected"
    return "", ""


def emit_dot(tree, result: Optional[SolveResult] = None, options: Optional[EmitOptions] = None,
             dist: Optional[ItemDistribution] = None) -> str:
    """Graphviz digraph; node ids ``n_i_j``, edges labelled with their branch cost."""
    model = result.model if result is not None else None
    lines = ["digraph tree {", "  node [fontname=\"monospace\"];"]

    if isinstance(tree, (Gap, SearchNode)):
        lo, hi = gap_range(tree)

        def walk_s(t, i, j):
            nid = f"n_{i}_{j}"
            if isinstance(t, Gap):
                lines.append(f'  {nid} [shape=box, label="gap {t.index}"];')
                return nid
            lines.append(f'  {nid} [shape=ellipse, label="= k{t.key} / < k{t.key}"];')
            left, right = walk_s(t.left, i, t.key - 1), walk_s(t.right, t.key, j)
            labels = ("", "")
            if isinstance(model, StaticModel):
                cl, cr = model.pair.side_costs(t.choice)
                labels = (str(cl), str(cr))
            lines.append(f'  {nid} -> {left} [label="{labels[0]}"];')
            lines.append(f'  {nid} -> {right} [label="{labels[1]}"];')
            return nid

        walk_s(tree, lo, hi)
    else:
        lo, hi = leaf_range(tree)

        def walk(t, i, j):
            nid = f"n_{i}_{j}"
            if isinstance(t, Leaf):
                lines.append(f'  {nid} [shape=box, label="{t.item}"];')
                return nid
            lines.append(f'  {nid} [shape=ellipse, label="< v{t.split - 1}"];')
            left, right = walk(t.left, i, t.split - 1), walk(t.right, t.split, j)
            ll, rl = _edge_labels(t, model, dist, i, j)
            lines.append(f'  {nid} -> {left} [label="{ll}"];')
            lines.append(f'  {nid} -> {right} [label="{rl}"];')
            return nid

        walk(tree, lo, hi)
    lines.append("}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# C-like code

_PREAMBLE = """\
#ifndef LIKELY
#define LIKELY(c) (c)
#endif
#ifndef UNLIKELY
#define UNLIKELY(c) (c)
#endif
"""


def _threshold(names, s):
    return names[s - 2] if names is not None else f"v{s - 1}"


def _cond(text, style):
    # the if-condition always tests the minority side
    if style == "macro":
        return f"if (UNLIKELY({text})) {{"
    if style == "comment":
        return f"if ({text}) {{ /* unlikely */"
    return f"if ({text}) {{"


def _emit_split(out, t, left_pred, right_pred, rec, ind, style):
    pad = "    " * ind
    likely = " /* likely */" if style == "comment" else ""
    # choice 1: the left side is the mispredicted one, so branch on the left predicate
    if t.choice == 1:
        taken_pred, taken, fall = left_pred, t.left, t.right
    else:
        taken_pred, taken, fall = right_pred, t.right, t.left
    out.append(f"{pad}{_cond(taken_pred, style)}")
    rec(taken, ind + 1)
    out.append(f"{pad}}} else {{{likely}")
    rec(fall, ind + 1)
    out.append(f"{pad}}}")


def emit_code(tree, options: Optional[EmitOptions] = None) -> str:
    """Nested if/else with the predicted (majority) side in the ``else`` arm.

    The ``if`` body is the branch target, so a forward branch predicted not
    taken falls through into the likely code. Search trees get an equality
    test before each inequality.
    """
    opts = options or EmitOptions()
    x, style = opts.variable, opts.hint_style
    out = []
    if style == "macro":
        out.append(_PREAMBLE)

    if isinstance(tree, (Gap, SearchNode)):
        names = _check_names(opts, gap_range(tree)[1] + 1)

        def walk_s(t, ind):
            pad = "    " * ind
            if isinstance(t, Gap):
                out.append(f"{pad}return MISSING({t.index});")
                return
            key = names[t.key - 1] if names is not None else f"k{t.key}"
            out.append(f"{pad}{_cond(f'{x} == {key}', 'none')}")
            out.append(f"{pad}    return FOUND({t.key});")
            out.append(f"{pad}}}")
            _emit_split(out, t, f"{x} < {key}", f"{x} > {key}", walk_s, ind, style)

        out.append(f"int search(int {x}) {{")
        walk_s(tree, 1)
    else:
        names = _check_names(opts, leaf_range(tree)[1])

        def walk(t, ind):
            if isinstance(t, Leaf):
                out.append(f"{'    ' * ind}return {t.item};")
                return
            v = _threshold(names, t.split)
            _emit_split(out, t, f"{x} < {v}", f"{x} >= {v}", walk, ind, style)

        out.append(f"int classify(int {x}) {{")
        walk(tree, 1)
    out.append("}")
    return "\n".join(out) + "\n"


def _check_names(opts: EmitOptions, n_leaves: int):
    names = opts.threshold_names
    if names is None:
        if opts.require_names:
            raise ModelError("threshold names requested but not supplied")
        return None
    if len(names) != n_leaves - 1:
        raise ModelError(f"expected {n_leaves - 1} threshold names, got {len(names)}")
    return list(names)
