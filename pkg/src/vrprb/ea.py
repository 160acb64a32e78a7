"""(1+1) evolutionary algorithm with an external Pareto archive.

A single individual is mutated in giant-tour space and decoded back into
routes. The mutant replaces the individual whenever no archived solution
dominates it; on acceptance the archive drops every member the mutant
dominates or ties exactly.

Two interchangeable backends run the same algorithm: ``"python"`` is the
readable reference, ``"compiled"`` is a numba kernel that consumes the random
generator identically and returns the same archive, fast enough for the full
benchmark.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Sequence

import numpy as np

from .construct import GiantTour, random_initial_solution, shuffle_in_place, split_giant_tour, to_giant_tour
from .model import Instance, Solution
from .objectives import BalanceObjective, ObjectiveVector, dominates, objective_vector


class Mutation(str, Enum):
    SWAP = "swap"
    REVERSE = "reverse"

    @classmethod
    def parse(cls, token: str | Mutation) -> Mutation:
        if isinstance(token, cls):
            return token
        try:
            return cls(token.strip().lower())
        except ValueError:
            raise ValueError(f"unknown mutation {token!r}; expected 'swap' or 'reverse'") from None

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class EaConfig:
    of: BalanceObjective
    mutation: Mutation
    max_iter: int = 30_000
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "of", BalanceObjective.parse(self.of))
        object.__setattr__(self, "mutation", Mutation.parse(self.mutation))
        if self.max_iter < 0:
            raise ValueError("max_iter must be non-negative")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")


# -- mutation operators ---------------------------------------------------------


def swap_mutation(tour: Sequence[int], rng: np.random.Generator) -> GiantTour:
    """Pick 2 to 4 positions and rearrange their clients by a non-identity permutation."""
    n = len(tour)
    k = int(rng.integers(2, 5))
    if k > n:
        warnings.warn(f"swap mutation on a {n}-client tour: swapping {n} positions instead of {k}", stacklevel=2)
        k = n
    idx = list(range(n))
    for a in range(k):
        r = int(rng.integers(a, n))
        idx[a], idx[r] = idx[r], idx[a]
    identity = list(range(k))
    perm = identity
    while perm == identity:
        perm = list(identity)
        shuffle_in_place(perm, rng)
    out = list(tour)
    for a in range(k):
        out[idx[a]] = tour[idx[perm[a]]]
    return tuple(out)


def reverse_mutation(tour: Sequence[int], rng: np.random.Generator) -> GiantTour:
    """Reverse the inclusive segment between two distinct random positions."""
    n = len(tour)
    i = int(rng.integers(0, n))
    j = int(rng.integers(0, n - 1))
    if j >= i:
        j += 1
    i, j = min(i, j), max(i, j)
    return reverse_segment(tour, i, j)


def reverse_segment(tour: Sequence[int], i: int, j: int) -> GiantTour:
    tour = tuple(tour)
    return tour[:i] + tour[i : j + 1][::-1] + tour[j + 1 :]


_MUTATIONS = {Mutation.SWAP: swap_mutation, Mutation.REVERSE: reverse_mutation}


# -- archive ---------------------------------------------------------------------


@dataclass
class ParetoArchive:
    """Mutually non-dominated (solution, vector) pairs, at most one per vector.

    Members keep insertion order; survivors stay in place and an accepted
    candidate is appended.
    """

    members: list[tuple[Solution, ObjectiveVector]] = field(default_factory=list)

    def __len__(self):
        return len(self.members)

    def __iter__(self) -> Iterator[tuple[Solution, ObjectiveVector]]:
        return iter(self.members)

    @property
    def solutions(self) -> list[Solution]:
        return [s for s, _ in self.members]

    @property
    def vectors(self) -> list[ObjectiveVector]:
        return [v for _, v in self.members]

    def insert(self, solution: Solution, vector: ObjectiveVector) -> bool:
        return archive_insert(self, (solution, vector))

    def min_distance(self) -> float:
        return min(v.total_distance for v in self.vectors)

    def min_balance(self) -> float:
        return min(v.balance for v in self.vectors)


def archive_insert(archive: ParetoArchive, candidate: tuple[Solution, ObjectiveVector]) -> bool:
    _, vec = candidate
    if any(dominates(v, vec) for _, v in archive.members):
        return False
    archive.members = [
        (s, v) for s, v in archive.members if not dominates(vec, v) and v.as_tuple() != vec.as_tuple()
    ]
    archive.members.append(candidate)
    return True


# -- driver ------------------------------------------------------------------------


@dataclass
class EaTrace:
    """Archive extremes recorded after every iteration."""

    min_distance: np.ndarray
    min_balance: np.ndarray


def _run_python(instance: Instance, config: EaConfig, record: bool):
    rng = np.random.default_rng(config.seed)
    mutate = _MUTATIONS[config.mutation]
    sol = random_initial_solution(instance, rng)
    archive = ParetoArchive()
    archive.insert(sol, objective_vector(instance, sol, config.of))
    tour = to_giant_tour(sol)
    trace_d = np.empty(config.max_iter if record else 0)
    trace_b = np.empty_like(trace_d)
    for it in range(config.max_iter):
        cand_tour = mutate(tour, rng)
        cand = split_giant_tour(instance, cand_tour)
        if archive.insert(cand, objective_vector(instance, cand, config.of)):
            tour = cand_tour
        if record:
            trace_d[it] = archive.min_distance()
            trace_b[it] = archive.min_balance()
    return archive, EaTrace(trace_d, trace_b)


def _run_compiled(instance: Instance, config: EaConfig, record: bool):
    from . import _kernel

    if config.mutation is Mutation.SWAP and instance.n_clients < 4:
        warnings.warn(f"swap mutation on a {instance.n_clients}-client instance caps the swap size", stacklevel=3)
    rng = np.random.default_rng(config.seed)
    tours, _, _, trace_d, trace_b = _kernel.run(
        instance.dist,
        np.asarray(instance.demands, dtype=np.float64),
        float(instance.capacity),
        config.of.code,
        _kernel.SWAP if config.mutation is Mutation.SWAP else _kernel.REVERSE,
        config.max_iter,
        rng,
        record,
    )
    archive = ParetoArchive()
    for row in tours:
        sol = split_giant_tour(instance, tuple(int(c) for c in row))
        archive.members.append((sol, objective_vector(instance, sol, config.of)))
    return archive, EaTrace(trace_d, trace_b)


_BACKENDS = {"python": _run_python, "compiled": _run_compiled}


def run_ea(instance: Instance, config: EaConfig, backend: str = "compiled") -> ParetoArchive:
    """Run one (1+1) EA and return its final archive."""
    return run_ea_traced(instance, config, backend, record=False)[0]


def run_ea_traced(
    instance: Instance, config: EaConfig, backend: str = "compiled", record: bool = True
) -> tuple[ParetoArchive, EaTrace]:
    try:
        runner = _BACKENDS[backend]
    except KeyError:
        raise ValueError(f"unknown backend {backend!r}; expected one of {sorted(_BACKENDS)}") from None
    return runner(instance, config, record)
