"""Hypervolume of archives in the shared (distance, Max-min) space.

Fronts produced under different balance objectives are re-scored with the
Max-min balance, divided by a deliberately poor reference point so that the
reference lands on (1, 1), and measured by an exact 2-D rectangle sweep.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .ea import ParetoArchive
from .model import Instance, Solution, route_lengths, total_distance
from .objectives import BalanceObjective, evaluate_balance

Point = tuple[float, float]

# slack for rounding when a front point sits exactly on the reference
_REF_RTOL = 1e-12


@dataclass(frozen=True)
class ReferencePoint:
    z_distance: float
    z_balance: float

    def __post_init__(self):
        if not (self.z_distance > 0 and self.z_balance > 0):
            raise ValueError(f"reference point must be strictly positive, got {self}")


def reference_point(instance: Instance) -> ReferencePoint:
    """Reference built from two capacity-ignoring synthetic solutions.

    Balance: Max-min of {clients 1..N-1 in index order, [N]}.
    Distance: total length of N out-and-back singleton routes.
    """
    n = instance.n_clients
    lopsided = Solution((tuple(range(1, n)), (n,)))
    z_balance = evaluate_balance(BalanceObjective.MAX_MIN, route_lengths(instance, lopsided))
    singletons = Solution(tuple((c,) for c in instance.clients))
    return ReferencePoint(total_distance(instance, singletons), z_balance)


def nondominated(points: Iterable[Point]) -> list[Point]:
    """Unique minimisation-non-dominated points, sorted by the first coordinate."""
    front: list[Point] = []
    best_second = float("inf")
    for p in sorted(set(points)):
        # ties on the first coordinate: sorted() puts the smaller second first
        if p[1] < best_second:
            front.append(p)
            best_second = p[1]
    return front


def reevaluate_max_min(instance: Instance, archive: ParetoArchive) -> list[Point]:
    if not len(archive):
        raise ValueError("cannot re-evaluate an empty archive")
    points = []
    for sol in archive.solutions:
        lengths = route_lengths(instance, sol)
        points.append((total_distance(instance, sol), evaluate_balance(BalanceObjective.MAX_MIN, lengths)))
    return nondominated(points)


def normalize(front: Sequence[Point], ref: ReferencePoint) -> list[Point]:
    out = []
    for d, b in front:
        if d > ref.z_distance * (1 + _REF_RTOL) or b > ref.z_balance * (1 + _REF_RTOL):
            raise ValueError(f"point ({d}, {b}) lies beyond the reference point ({ref.z_distance}, {ref.z_balance})")
        out.append((min(max(d / ref.z_distance, 0.0), 1.0), min(max(b / ref.z_balance, 0.0), 1.0)))
    return out


def hypervolume_2d(front: Sequence[Point]) -> float:
    """Area dominated by ``front`` inside the unit square, reference (1, 1)."""
    if not front:
        raise ValueError("hypervolume of an empty front is undefined")
    for x, y in front:
        if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
            raise ValueError(f"point ({x}, {y}) outside the unit square; normalize first")
    pts = nondominated(front)
    area = 0.0
    for k, (x, y) in enumerate(pts):
        right = pts[k + 1][0] if k + 1 < len(pts) else 1.0
        area += (right - x) * (1.0 - y)
    return area


def archive_hypervolume(instance: Instance, archive: ParetoArchive, ref: ReferencePoint | None = None) -> float:
    """Normalised Max-min-space hypervolume of one run's archive."""
    ref = ref or reference_point(instance)
    return hypervolume_2d(normalize(reevaluate_max_min(instance, archive), ref))
