"""Random initial solutions and the giant-tour encoding.

A giant tour is the concatenation of a solution's routes. ``split_giant_tour``
decodes it again by greedy, capacity-driven filling in tour order, so the
pair ``to_giant_tour`` / ``split_giant_tour`` is lossless for any tour.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .model import Instance, Solution

GiantTour = tuple[int, ...]


def shuffle_in_place(values: list[int], rng: np.random.Generator) -> None:
    # Fisher-Yates drawn with rng.integers so the compiled kernel consumes
    # the generator identically.
    for k in range(len(values) - 1, 0, -1):
        r = int(rng.integers(0, k + 1))
        values[k], values[r] = values[r], values[k]


def random_giant_tour(instance: Instance, rng: np.random.Generator) -> GiantTour:
    order = list(instance.clients)
    shuffle_in_place(order, rng)
    return tuple(order)


def split_giant_tour(instance: Instance, tour: Sequence[int]) -> Solution:
    routes: list[tuple[int, ...]] = []
    current: list[int] = []
    load = 0.0
    for c in tour:
        d = instance.demands[c]
        if current and load + d > instance.capacity:
            routes.append(tuple(current))
            current, load = [], 0.0
        current.append(c)
        load += d
    if current:
        routes.append(tuple(current))
    return Solution(tuple(routes))


def to_giant_tour(solution: Solution) -> GiantTour:
    return tuple(c for route in solution.routes for c in route)


def random_initial_solution(instance: Instance, rng: np.random.Generator) -> Solution:
    """Uniformly random client permutation, split greedily into routes."""
    return split_giant_tour(instance, random_giant_tour(instance, rng))
