"""Instances, solutions and the Euclidean cost model.

An :class:`Instance` holds a depot (node 0) and ``N`` clients. A
:class:`Solution` is a tuple of routes, each route a tuple of client indices
visited in order; every route starts and ends at the depot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

Route = tuple[int, ...]


@dataclass(frozen=True)
class Instance:
    id: str
    coords: tuple[tuple[float, float], ...]
    demands: tuple[float, ...]
    capacity: float
    fleet_hint: int = 2
    dist: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple((float(x), float(y)) for x, y in self.coords))
        object.__setattr__(self, "demands", tuple(float(d) for d in self.demands))
        if len(self.coords) != len(self.demands):
            raise ValueError(f"{self.id}: {len(self.coords)} coordinates but {len(self.demands)} demands")
        if self.n_clients < 2:
            raise ValueError(f"{self.id}: need at least 2 clients, got {self.n_clients}")
        if self.demands[0] != 0:
            raise ValueError(f"{self.id}: depot demand must be 0")
        if self.capacity <= 0:
            raise ValueError(f"{self.id}: capacity must be positive")
        for i, d in enumerate(self.demands[1:], start=1):
            if d < 0 or d > self.capacity:
                raise ValueError(f"{self.id}: demand of client {i} ({d}) outside [0, {self.capacity}]")
        xy = np.asarray(self.coords)
        dx = xy[:, None, 0] - xy[None, :, 0]
        dy = xy[:, None, 1] - xy[None, :, 1]
        # same expression as distance() so both round identically
        matrix = np.sqrt(dx * dx + dy * dy)
        matrix.setflags(write=False)
        object.__setattr__(self, "dist", matrix)

    @property
    def n_clients(self) -> int:
        return len(self.coords) - 1

    @property
    def clients(self) -> range:
        return range(1, self.n_clients + 1)

    @property
    def total_demand(self) -> float:
        return sum(self.demands)


@dataclass(frozen=True)
class Solution:
    routes: tuple[Route, ...]

    def __post_init__(self):
        object.__setattr__(self, "routes", tuple(tuple(int(c) for c in r) for r in self.routes))

    def __len__(self):
        return len(self.routes)

    def __iter__(self):
        return iter(self.routes)


def distance(instance: Instance, o: int, s: int) -> float:
    n = instance.n_clients
    if not (0 <= o <= n and 0 <= s <= n):
        raise IndexError(f"node index out of range 0..{n}: ({o}, {s})")
    xo, yo = instance.coords[o]
    xs, ys = instance.coords[s]
    dx = xo - xs
    dy = yo - ys
    return math.sqrt(dx * dx + dy * dy)


def route_length(instance: Instance, route: Sequence[int]) -> float:
    """Closed tour length depot -> clients in order -> depot.

    Summed left to right, in the same order as the compiled EA kernel.
    """
    d = instance.dist
    prev = 0
    total = 0.0
    for c in route:
        total += d[prev, c]
        prev = c
    total += d[prev, 0]
    return float(total)


def route_load(instance: Instance, route: Sequence[int]) -> float:
    return sum(instance.demands[c] for c in route)


def route_lengths(instance: Instance, solution: Solution) -> list[float]:
    return [route_length(instance, r) for r in solution.routes]


def total_distance(instance: Instance, solution: Solution) -> float:
    total = 0.0
    for length in route_lengths(instance, solution):
        total += length
    return total


def check_solution(instance: Instance, solution: Solution) -> None:
    """Raise ``ValueError`` unless ``solution`` is a feasible partition of the clients."""
    if not solution.routes:
        raise ValueError("solution has no routes")
    seen: set[int] = set()
    for k, route in enumerate(solution.routes):
        if not route:
            raise ValueError(f"route {k} is empty")
        if len(set(route)) != len(route):
            raise ValueError(f"route {k} repeats a client")
        if seen.intersection(route):
            raise ValueError(f"route {k} shares clients with an earlier route")
        seen.update(route)
        load = route_load(instance, route)
        if load > instance.capacity:
            raise ValueError(f"route {k} load {load} exceeds capacity {instance.capacity}")
    if seen != set(instance.clients):
        raise ValueError("routes do not cover every client exactly once")


def is_feasible(instance: Instance, solution: Solution) -> bool:
    try:
        check_solution(instance, solution)
    except ValueError:
        return False
    return True


# -- text format --------------------------------------------------------------
#
#   N T Q
#   0 x0 y0 0
#   1 x1 y1 d1
#   ...


def format_instance(instance: Instance) -> str:
    lines = [f"{instance.n_clients} {instance.fleet_hint} {instance.capacity:g}"]
    for i, ((x, y), d) in enumerate(zip(instance.coords, instance.demands)):
        lines.append(f"{i} {x!r} {y!r} {d:g}")
    return "\n".join(lines) + "\n"


def parse_instance(text: str, instance_id: str) -> Instance:
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    if not rows:
        raise ValueError(f"{instance_id}: empty instance file")
    try:
        n, fleet, cap = int(rows[0][0]), int(rows[0][1]), float(rows[0][2])
    except (IndexError, ValueError) as exc:
        raise ValueError(f"{instance_id}: bad header line {rows[0]!r}") from exc
    body = rows[1:]
    if len(body) < n + 1:
        raise ValueError(f"{instance_id}: header declares {n} clients but only {len(body)} node lines")
    coords, demands = [], []
    for k, row in enumerate(body[: n + 1]):
        if len(row) < 4 or int(row[0]) != k:
            raise ValueError(f"{instance_id}: node line {k} malformed: {row!r}")
        coords.append((float(row[1]), float(row[2])))
        demands.append(float(row[3]))
    return Instance(instance_id, tuple(coords), tuple(demands), cap, fleet)


def read_instance(path: str | Path) -> Instance:
    path = Path(path)
    return parse_instance(path.read_text(), path.stem)


def write_instance(instance: Instance, path: str | Path) -> None:
    Path(path).write_text(format_instance(instance))
