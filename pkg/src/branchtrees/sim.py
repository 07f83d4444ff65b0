"""Monte Carlo execution of a decision tree with one predictor per node.

Items are drawn i.i.d. proportional to their weights. At each node the
outcome "taken" means going to the node's minority side (per its recorded
choice), matching the emitted code where the fall-through is the majority
side. Costs are accumulated as integer misprediction/prediction counts so the
reported sums are exact and replication merges are order-independent.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Optional, Union

import numpy as np

from .model import DecisionTree, ItemDistribution, ModelError, StaticCostPair, internal_nodes, leaf_range
from .predictor import PredictorAutomaton, get_automaton


@dataclass(frozen=True)
class NodeStats:
    visits: int
    mispredictions: int

    @property
    def rate(self) -> float:
        return self.mispredictions / self.visits if self.visits else 0.0


@dataclass(frozen=True)
class SimReport:
    iterations: int
    warmup_discarded: int
    seed: int
    pair: StaticCostPair
    per_node: dict                      # (i, j, s) -> NodeStats
    # exact sufficient statistics of the per-draw cost c1*m + c2*(d - m)
    sum_miss: int = 0
    sum_hit: int = 0
    sum_miss2: int = 0
    sum_hit2: int = 0
    sum_cross: int = 0
    predictor: str = field(default="static")

    @property
    def total_cost(self) -> Fraction:
        return self.pair.c_mispredict * self.sum_miss + self.pair.c_predict * self.sum_hit

    @property
    def mean_cost(self) -> float:
        return float(self.total_cost / self.iterations)

    @property
    def variance(self) -> float:
        a, b = self.pair.c_mispredict, self.pair.c_predict
        sq = a * a * self.sum_miss2 + 2 * a * b * self.sum_cross + b * b * self.sum_hit2
        mean = self.total_cost / self.iterations
        if self.iterations < 2:
            return 0.0
        return float((sq - self.iterations * mean * mean) / (self.iterations - 1))

    @property
    def std_error(self) -> float:
        return (self.variance / self.iterations) ** 0.5

    def to_json(self) -> dict:
        return {
            "iterations": self.iterations,
            "warmup_discarded": self.warmup_discarded,
            "seed": self.seed,
            "predictor": self.predictor,
            "mean_cost": self.mean_cost,
            "total_cost": str(self.total_cost),
            "variance": self.variance,
            "per_node": {
                f"{i},{j},{s}": {"visits": st.visits, "mispredictions": st.mispredictions, "rate": st.rate}
                for (i, j, s), st in sorted(self.per_node.items())
            },
        }


def merge_reports(reports) -> SimReport:
    """Combine replications. Commutative and associative: everything is an integer sum."""
    reports = list(reports)
    if not reports:
        raise ModelError("nothing to merge")
    first = reports[0]
    keys = sorted(first.per_node)
    per_node = {
        k: NodeStats(sum(r.per_node[k].visits for r in reports), sum(r.per_node[k].mispredictions for r in reports))
        for k in keys
    }
    return SimReport(
        iterations=sum(r.iterations for r in reports),
        warmup_discarded=sum(r.warmup_discarded for r in reports),
        seed=first.seed,
        pair=first.pair,
        per_node=per_node,
        sum_miss=sum(r.sum_miss for r in reports),
        sum_hit=sum(r.sum_hit for r in reports),
        sum_miss2=sum(r.sum_miss2 for r in reports),
        sum_hit2=sum(r.sum_hit2 for r in reports),
        sum_cross=sum(r.sum_cross for r in reports),
        predictor=first.predictor,
    )


def _integer_weights(dist: ItemDistribution) -> np.ndarray:
    den = lcm(*(w.denominator for w in dist.weights))
    return np.array([int(w * den) for w in dist.weights], dtype=object)


def sample_items(dist: ItemDistribution, size: int, rng: np.random.Generator) -> np.ndarray:
    """Draw 1-based items with exact probabilities ``w_i / total``."""
    cum = np.cumsum(_integer_weights(dist))
    total = int(cum[-1])
    if total >= 2 ** 63:
        raise ModelError("weights too finely divided for exact integer sampling")
    u = rng.integers(0, total, size=size, dtype=np.int64)
    # half-open buckets [cum[k-1], cum[k])
    return np.searchsorted(cum.astype(np.int64), u, side="right") + 1


def _run_automaton(auto: PredictorAutomaton, taken: np.ndarray, initial: int) -> np.ndarray:
    """Misprediction flags for an outcome sequence, stepping one predictor."""
    nxt = auto.next
    pred_t = [p == "T" for p in auto.predict]
    out = np.empty(len(taken), dtype=bool)
    s = initial
    for idx, t in enumerate(taken.tolist()):
        out[idx] = pred_t[s] != t
        s = nxt[s][t]
    return out


def _replicate(tree, dist, automaton, pair, iterations, warmup, seed_seq, initial_state):
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    items = sample_items(dist, warmup + iterations, rng)
    miss = np.zeros(len(items), dtype=np.int64)
    depth = np.zeros(len(items), dtype=np.int64)
    per_node = {}
    for i, j, node in internal_nodes(tree):
        s = node.split
        here = (items >= i) & (items <= j)
        idx = np.nonzero(here)[0]
        goes_right = items[idx] >= s
        # choice 1: left is the minority side, so taken = going left
        taken = ~goes_right if node.choice == 1 else goes_right
        if automaton is None:
            flags = taken
        else:
            flags = _run_automaton(automaton, taken.astype(np.int64), initial_state)
        np.add.at(miss, idx, flags.astype(np.int64))
        depth[idx] += 1
        measured = idx >= warmup
        per_node[i, j, s] = NodeStats(int(measured.sum()), int(flags[measured].sum()))
    miss, hit = miss[warmup:], (depth - miss)[warmup:]
    return SimReport(
        iterations=iterations,
        warmup_discarded=warmup,
        seed=0,
        pair=pair,
        per_node=per_node,
        sum_miss=int(miss.sum()),
        sum_hit=int(hit.sum()),
        sum_miss2=int((miss * miss).sum()),
        sum_hit2=int((hit * hit).sum()),
        sum_cross=int((miss * hit).sum()),
        predictor="static" if automaton is None else automaton.name,
    )


def simulate(
    tree: DecisionTree,
    dist: ItemDistribution,
    automaton: Union[str, PredictorAutomaton, None],
    pair: StaticCostPair,
    iterations: int,
    seed: int,
    warmup: int = 0,
    replications: int = 1,
    initial_state: Optional[int] = None,
    workers: int = 1,
) -> SimReport:
    """Run ``iterations`` measured draws (after ``warmup`` discarded ones).

    ``automaton`` is ``"static"``/None for fixed majority prediction, or a
    built-in name / automaton for dynamic prediction. Replication ``r`` uses
    the ``r``-th child of ``SeedSequence(seed)``; iterations and warmup are
    split evenly across replications, each with private predictor state.
    """
    if iterations < 1:
        raise ModelError("iterations must be at least 1")
    if not 0 <= warmup < iterations:
        raise ModelError("warmup must satisfy 0 <= warmup < iterations")
    if replications < 1 or replications > iterations:
        raise ModelError("bad replication count")
    if leaf_range(tree) != (1, dist.n):
        raise ModelError("tree does not cover the distribution")
    if automaton in (None, "static"):
        auto = None
    else:
        auto = get_automaton(automaton)
    init = (auto.initial if auto is not None else 0) if initial_state is None else initial_state
    if auto is not None and not 0 <= init < auto.state_count:
        raise ModelError("initial state out of range")

    children = np.random.SeedSequence(seed).spawn(replications)
    its = [iterations // replications + (r < iterations % replications) for r in range(replications)]
    wus = [warmup // replications + (r < warmup % replications) for r in range(replications)]
    jobs = [(tree, dist, auto, pair, its[r], wus[r], children[r], init) for r in range(replications)]
    if workers > 1 and replications > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_replicate_star, jobs))
    else:
        reports = [_replicate(*job) for job in jobs]
    merged = merge_reports(reports)
    return SimReport(**{**merged.__dict__, "seed": seed})


def _replicate_star(args):
    return _replicate(*args)
