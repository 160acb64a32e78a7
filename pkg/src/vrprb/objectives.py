"""Route-balance objective functions and bi-objective dominance.

Every balance function takes the vector of per-route tour lengths. All of them
are minimised, and all but ``MIN_MAX`` are zero for perfectly equal routes.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .model import Instance, Solution, route_lengths


class DegenerateInputError(ValueError):
    """Balance value undefined, e.g. Rel or Gini over all-zero route lengths."""


class BalanceObjective(str, Enum):
    ALL_MIN = "all-min"
    MAX_MIN = "max-min"
    MIN_MAX = "min-max"
    REL = "rel"
    VAR = "var"
    MAD = "mad"
    GINI = "gini"

    @property
    def code(self) -> int:
        """Position in declaration order; the compiled kernel switches on it."""
        return _CODES[self]

    @classmethod
    def parse(cls, token: str | BalanceObjective) -> BalanceObjective:
        if isinstance(token, cls):
            return token
        try:
            return cls(token.strip().lower().replace("_", "-"))
        except ValueError:
            raise ValueError(f"unknown balance objective {token!r}; expected one of {[o.value for o in cls]}") from None

    def __str__(self):
        return self.value


ALL_OBJECTIVES: tuple[BalanceObjective, ...] = tuple(BalanceObjective)
_CODES = {of: k for k, of in enumerate(ALL_OBJECTIVES)}


def _total(values) -> float:
    # plain left-to-right sum (sum() is compensated on 3.12+); the kernel matches this
    acc = 0.0
    for v in values:
        acc += v
    return acc


def evaluate_balance(of: BalanceObjective | str, lengths: Sequence[float]) -> float:
    of = BalanceObjective.parse(of)
    if not lengths:
        raise DegenerateInputError("balance of an empty route set")
    n = len(lengths)
    lo, hi = min(lengths), max(lengths)

    if of is BalanceObjective.ALL_MIN:
        return _total(l - lo for l in lengths)
    if of is BalanceObjective.MAX_MIN:
        return hi - lo
    if of is BalanceObjective.MIN_MAX:
        return hi
    if of is BalanceObjective.REL:
        if hi <= 0:
            raise DegenerateInputError("Rel needs a positive maximum route length")
        return _total((hi - l) / hi for l in lengths) / n

    mean = _total(lengths) / n
    if of is BalanceObjective.VAR:
        # population form; rounding can push equal lengths a hair below zero
        return max(0.0, _total(l * l for l in lengths) / n - mean * mean)
    if of is BalanceObjective.MAD:
        return _total(abs(l - mean) for l in lengths) / n
    if of is BalanceObjective.GINI:
        if mean <= 0:
            raise DegenerateInputError("Gini needs a positive mean route length")
        diffs = _total(abs(a - b) for a in lengths for b in lengths)
        return diffs / (2.0 * n * n * mean)
    raise AssertionError(of)


@dataclass(frozen=True)
class ObjectiveVector:
    total_distance: float
    balance: float
    of: BalanceObjective

    def as_tuple(self) -> tuple[float, float]:
        return (self.total_distance, self.balance)


def objective_vector(instance: Instance, solution: Solution, of: BalanceObjective | str) -> ObjectiveVector:
    of = BalanceObjective.parse(of)
    lengths = route_lengths(instance, solution)
    return ObjectiveVector(_total(lengths), evaluate_balance(of, lengths), of)


def dominates(u: ObjectiveVector, v: ObjectiveVector) -> bool:
    """Pareto dominance for minimisation: no worse in both, strictly better in one."""
    if u.of is not v.of:
        raise ValueError(f"cannot compare vectors from different objectives ({u.of} vs {v.of})")
    return (
        u.total_distance <= v.total_distance
        and u.balance <= v.balance
        and (u.total_distance < v.total_distance or u.balance < v.balance)
    )


__all__ = [
    "ALL_OBJECTIVES",
    "BalanceObjective",
    "DegenerateInputError",
    "ObjectiveVector",
    "dominates",
    "evaluate_balance",
    "objective_vector",
]
