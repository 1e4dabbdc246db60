"""Optimal-mode and optimal-system choice by the evenness (max-product) rule.

Among candidates whose top-level scores tie, the winner is the one whose
component vector has the largest product: for a fixed sum the product is
maximal when the components are equal, so this prefers balanced behaviour
over a mix of strong and weak components.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

DEFAULT_EPS = 1e-9


@dataclass(frozen=True)
class TieSet:
    """Candidates whose scores lie within eps of the best score."""

    indices: tuple[int, ...]
    score: float
    eps: float

    def __post_init__(self) -> None:
        if not self.indices:
            raise ValueError("tie set must not be empty")


def tie_set(scores: Sequence[float], eps: float = DEFAULT_EPS) -> TieSet:
    """Indices of all scores within eps of the maximum."""
    if len(scores) == 0:
        raise ValueError("cannot build a tie set from no scores")
    if eps < 0:
        raise ValueError(f"eps must be non-negative, got {eps}")
    top = max(scores)
    members = tuple(i for i, s in enumerate(scores) if s >= top - eps)
    return TieSet(indices=members, score=float(top), eps=float(eps))


def log_product(row: Sequence[float]) -> float:
    """Sum of logarithms; overflow-safe stand-in for the raw product."""
    total = 0.0
    for i, x in enumerate(row):
        if x <= 0:
            raise ValueError(
                f"product criterion needs positive components, got {x} at position {i}"
            )
        total += math.log(x)
    return total


def _max_product(rows: Sequence[Sequence[float]], ties: TieSet) -> tuple[int, ...]:
    # eps is applied to log-products, i.e. as a relative tolerance on the
    # products themselves; this keeps the choice invariant under rescaling.
    logs = {i: log_product(rows[i]) for i in ties.indices}
    best = max(logs.values())
    return tuple(i for i in ties.indices if logs[i] >= best - ties.eps)


def optimal_mode(
    per_mode_rows: Sequence[Sequence[float]], ties: TieSet
) -> tuple[int, ...]:
    """Most even mode(s) among the tied ones.

    per_mode_rows[l] holds mode l's per-characteristic scores; the mode(s)
    maximizing their product win.  Multi-way final ties return every winner.
    """
    return _max_product(per_mode_rows, ties)


def optimal_system(
    per_system_rows: Sequence[Sequence[float]], ties: TieSet
) -> tuple[int, ...]:
    """Most even system(s) of an equivalence class, by per-mode score product."""
    return _max_product(per_system_rows, ties)
