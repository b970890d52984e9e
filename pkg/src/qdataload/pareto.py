"""Dominance, Pareto sets, constraint filtering and weighted ranking.

All three objectives (depth, classical runtime, qubit count) are minimized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .registry import ObjectivePoint

# Scores are compared after rounding so that sums that differ only by
# floating-point association order tie.
_SCORE_DIGITS = 12


@dataclass(frozen=True)
class ConstraintSet:
    max_depth: Optional[float] = None
    max_runtime: Optional[float] = None
    max_qubits: Optional[float] = None

    def __post_init__(self):
        for bound in (self.max_depth, self.max_runtime, self.max_qubits):
            if bound is not None and not bound > 0:
                raise ValueError(f"constraint bounds must be positive, got {bound!r}")

    @property
    def bounds(self) -> tuple:
        inf = math.inf
        return tuple(
            inf if b is None else b for b in (self.max_depth, self.max_runtime, self.max_qubits)
        )

    def admits(self, p: ObjectivePoint) -> bool:
        return all(v <= b for v, b in zip(p.values, self.bounds))


@dataclass(frozen=True)
class WeightVector:
    """Objective weights, normalized to sum to one on construction."""

    w_depth: float = 1.0
    w_runtime: float = 1.0
    w_qubits: float = 1.0

    def __post_init__(self):
        ws = (self.w_depth, self.w_runtime, self.w_qubits)
        if any(not math.isfinite(w) or w < 0 for w in ws):
            raise ValueError(f"weights must be finite and non-negative, got {ws}")
        total = sum(ws)
        if total == 0:
            raise ValueError("weights must not all be zero")
        object.__setattr__(self, "w_depth", self.w_depth / total)
        object.__setattr__(self, "w_runtime", self.w_runtime / total)
        object.__setattr__(self, "w_qubits", self.w_qubits / total)

    @property
    def values(self) -> tuple:
        return (self.w_depth, self.w_runtime, self.w_qubits)


@dataclass(frozen=True)
class RankedPoint:
    rank: int
    score: float
    point: ObjectivePoint


def dominates(a: ObjectivePoint, b: ObjectivePoint) -> bool:
    """True iff ``a`` is no worse than ``b`` everywhere and strictly better somewhere."""
    if a.bindings != b.bindings:
        raise ValueError(
            f"cannot compare points evaluated at different bindings: {a.bindings} vs {b.bindings}"
        )
    av, bv = a.values, b.values
    return all(x <= y for x, y in zip(av, bv)) and any(x < y for x, y in zip(av, bv))


def pareto_set(points: Sequence[ObjectivePoint]) -> list[ObjectivePoint]:
    """Non-dominated subset of ``points``, in input order.

    Points sharing an objective vector are all kept.
    """
    points = list(points)
    if not points:
        raise ValueError("pareto_set of an empty point list")
    bindings = points[0].bindings
    if any(p.bindings != bindings for p in points):
        raise ValueError("all points must share the same bindings")

    # Sort-and-sweep: a point can only be dominated by one that precedes it
    # lexicographically, so each candidate is checked against the front so far.
    order = sorted(range(len(points)), key=lambda i: points[i].values)
    front: list[int] = []
    keep = [False] * len(points)
    for i in order:
        p = points[i]
        if not any(dominates(points[j], p) for j in front):
            front.append(i)
            keep[i] = True
    return [p for p, k in zip(points, keep) if k]


def filter_constraints(points: Sequence[ObjectivePoint], c: ConstraintSet) -> list[ObjectivePoint]:
    return [p for p in points if c.admits(p)]


def weighted_score(p: ObjectivePoint, w: WeightVector) -> float:
    if any(v <= 0 for v in p.values):
        raise ValueError(f"{p.algorithm}: objectives must be positive to score")
    return sum(wi * math.log10(v) for wi, v in zip(w.values, p.values))


def rank_weighted(points: Sequence[ObjectivePoint], w: WeightVector) -> list[RankedPoint]:
    """Order points by weighted log10 score, ascending.

    Ties are listed by algorithm name and share a rank (1, 1, 3, ...).
    """
    scored = [(round(weighted_score(p, w), _SCORE_DIGITS), weighted_score(p, w), p) for p in points]
    scored.sort(key=lambda t: (t[0], t[2].algorithm))
    out = []
    rank = 0
    prev = None
    for position, (key, score, p) in enumerate(scored, start=1):
        if key != prev:
            rank = position
            prev = key
        out.append(RankedPoint(rank, score, p))
    return out
