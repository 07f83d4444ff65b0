"""Branch predictor models: static, the A2/A3 two-bit chains, and a generic
stationary-distribution solver used to check the closed forms.

Outcomes are ``"N"`` (untaken) and ``"T"`` (taken). ``p1`` is the probability
of a taken branch; both built-in chains are symmetric under N/T relabelling,
so the rates are symmetric under ``p1 -> 1 - p1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .model import ModelError, StaticCostPair, to_rational


@dataclass(frozen=True)
class PredictorAutomaton:
    """Moore-style predictor. ``next[s] = (state after N, state after T)``."""

    predict: tuple[str, ...]
    next: tuple[tuple[int, int], ...]
    initial: int = 1
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "predict", tuple(self.predict))
        object.__setattr__(self, "next", tuple(tuple(t) for t in self.next))
        n = len(self.predict)
        if n == 0:
            raise ModelError("automaton needs at least one state")
        if len(self.next) != n:
            raise ModelError("predict and next must list the same states")
        if any(p not in ("N", "T") for p in self.predict):
            raise ModelError("predictions must be 'N' or 'T'")
        for row in self.next:
            if len(row) != 2 or any(not (isinstance(t, int) and 0 <= t < n) for t in row):
                raise ModelError(f"bad transition row {row!r}")
        if not 0 <= self.initial < n:
            raise ModelError(f"initial state {self.initial} out of range")

    @property
    def state_count(self) -> int:
        return len(self.predict)

    def step(self, state: int, taken: bool) -> int:
        return self.next[state][1 if taken else 0]

    def to_json(self) -> dict:
        return {"states": self.state_count, "predict": list(self.predict),
                "next": [list(r) for r in self.next], "initial": self.initial}

    @classmethod
    def from_json(cls, data: dict, name: str = "custom") -> "PredictorAutomaton":
        try:
            auto = cls(tuple(data["predict"]), tuple(tuple(r) for r in data["next"]),
                       int(data.get("initial", 1)), name)
        except (KeyError, TypeError) as exc:
            raise ModelError(f"malformed automaton: {exc}") from exc
        if "states" in data and data["states"] != auto.state_count:
            raise ModelError("'states' disagrees with the transition table")
        return auto


# saturating up-down counter
A2 = PredictorAutomaton(
    ("N", "N", "T", "T"),
    ((0, 1), (0, 2), (1, 3), (2, 3)),
    initial=1, name="A2",
)

# two-bit chain with weak states jumping across on a miss
A3 = PredictorAutomaton(
    ("N", "N", "T", "T"),
    ((0, 1), (0, 3), (0, 3), (2, 3)),
    initial=1, name="A3",
)

BUILTIN = {"A2": A2, "A3": A3}


def get_automaton(kind: Union[str, PredictorAutomaton]) -> PredictorAutomaton:
    if isinstance(kind, PredictorAutomaton):
        return kind
    try:
        return BUILTIN[kind]
    except KeyError:
        raise ModelError(f"unknown automaton {kind!r}") from None


def _check_prob(p, hi=1):
    if not 0 <= p <= hi:
        raise ModelError(f"probability {p} outside [0, {hi}]")
    return p


def static_rate(p1):
    """Predicting the majority outcome misses with probability ``p1``."""
    return _check_prob(p1, Fraction(1, 2))


def rate_a2(p1):
    _check_prob(p1)
    return (p1 - p1 * p1) / (1 - 2 * p1 + 2 * p1 * p1)


def rate_a3(p1):
    # the printed closed form has +4p^3 in the numerator; that exceeds 1 at p=1/2
    # and disagrees with the chain. -4p^3 is what the chain gives.
    _check_prob(p1)
    p2, p3, p4 = p1 * p1, p1 ** 3, p1 ** 4
    return (p1 + p2 - 4 * p3 + 2 * p4) / (1 - p1 + p2)


RATE_FUNCTIONS = {"A2": rate_a2, "A3": rate_a3, "static": static_rate}


def _reachable(auto: PredictorAutomaton, start: int, outcomes: Sequence[int]) -> set[int]:
    seen, stack = {start}, [start]
    while stack:
        s = stack.pop()
        for o in outcomes:
            t = auto.next[s][o]
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return seen


def _limit_rate(auto: PredictorAutomaton, taken: bool) -> Fraction:
    # deterministic input: follow the orbit from the initial state to its cycle
    order, s = [], auto.initial
    while s not in order:
        order.append(s)
        s = auto.step(s, taken)
    cycle = order[order.index(s):]
    miss = sum(1 for t in cycle if (auto.predict[t] == "T") != taken)
    return Fraction(miss, len(cycle))


def _solve_exact(P: list[list[Fraction]]) -> list[Fraction]:
    """Stationary vector of an irreducible chain by Gauss-Jordan over Fractions."""
    n = len(P)
    # (P^T - I) pi = 0 with one row replaced by sum(pi) = 1
    A = [[P[c][r] - (1 if r == c else 0) for c in range(n)] for r in range(n)]
    A[-1] = [Fraction(1)] * n
    b = [Fraction(0)] * (n - 1) + [Fraction(1)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        b[col], b[piv] = b[piv], b[col]
        inv = 1 / A[col][col]
        A[col] = [x * inv for x in A[col]]
        b[col] *= inv
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
                b[r] -= f * b[col]
    return b


def stationary_distribution(auto, p1):
    """Stationary distribution of the chain driven by i.i.d. outcomes, P[T] = p1.

    Exact (Fractions) for rational ``p1``, numpy otherwise.
    """
    auto = get_automaton(auto)
    n = auto.state_count
    if not 0 < p1 < 1:
        raise ModelError("stationary distribution needs 0 < p1 < 1")
    if any(_reachable(auto, s, (0, 1)) != set(range(n)) for s in range(n)):
        raise ModelError(f"automaton {auto.name} is not irreducible")
    exact = isinstance(p1, (int, Fraction))
    one = Fraction(1) if exact else 1.0
    P = [[one * 0] * n for _ in range(n)]
    for s, (dn, up) in enumerate(auto.next):
        P[s][dn] += one - p1
        P[s][up] += p1
    if exact:
        return _solve_exact(P)
    M = np.asarray(P, dtype=float).T - np.eye(n)
    M[-1, :] = 1.0
    rhs = np.zeros(n)
    rhs[-1] = 1.0
    return list(np.linalg.solve(M, rhs))


def stationary_rate(auto, p1):
    """Long-run misprediction probability of ``auto`` under P[T] = ``p1``."""
    auto = get_automaton(auto)
    if isinstance(p1, str):
        p1 = to_rational(p1)
    _check_prob(p1)
    if p1 == 0 or p1 == 1:
        limit = _limit_rate(auto, p1 == 1)
        return limit if isinstance(p1, (int, Fraction)) else float(limit)
    pi = stationary_distribution(auto, p1)
    return sum(w * ((1 - p1) if auto.predict[s] == "T" else p1) for s, w in enumerate(pi))


def rate_function(kind):
    """Misprediction rate as a function of p1 for a predictor kind."""
    if isinstance(kind, PredictorAutomaton):
        return lambda p: stationary_rate(kind, p)
    try:
        return RATE_FUNCTIONS[kind]
    except KeyError:
        raise ModelError(f"unknown predictor {kind!r}") from None


def branch_cost_dynamic(pair: StaticCostPair, kind, p_min, p_max):
    """Expected cost of one branch whose children carry masses ``p_min <= p_max``."""
    if p_min < 0 or p_max < 0:
        raise ModelError("negative mass")
    if p_min > p_max:
        raise ModelError("p_min must not exceed p_max")
    m = p_min + p_max
    if m == 0:
        return m
    f = rate_function(kind)(p_min / m)
    return pair.c_mispredict * m * f + pair.c_predict * m * (1 - f)


def mispredict_curve(kind, points: int):
    """``points`` evenly spaced ``(p1, rate)`` pairs over [0, 1/2], exact where possible."""
    if points < 2:
        raise ModelError("need at least two curve points")
    f = rate_function(kind)
    out = []
    for k in range(points):
        p = Fraction(k, 2 * (points - 1))
        out.append((p, f(p)))
    return out


def worst_case_ratio(kind, grid: int = 20001):
    """Maximise rate(p1)/p1 over (0, 1/2]; grid search refined by bounded minimisation."""
    from scipy.optimize import minimize_scalar

    f = rate_function(kind)
    ps = np.linspace(0.5 / grid, 0.5, grid)
    ratios = np.array([float(f(float(p))) / p for p in ps])
    k = int(np.argmax(ratios))
    lo, hi = ps[max(k - 1, 0)], ps[min(k + 1, grid - 1)]
    res = minimize_scalar(lambda p: -float(f(p)) / p, bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    if -res.fun >= ratios[k]:
        return float(res.x), float(-res.fun)
    return float(ps[k]), float(ratios[k])
