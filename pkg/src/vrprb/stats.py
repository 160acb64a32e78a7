"""Welch's t-test and the pairwise win/loss scoring of balance objectives."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

from .ea import Mutation
from .objectives import ALL_OBJECTIVES, BalanceObjective

_CF_EPS = 1e-15
_CF_TINY = 1e-300
_CF_MAX_ITER = 10_000


def _beta_cf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (modified Lentz)."""
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and 0 <= x <= 1."""
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return x
    log_front = math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b) + a * math.log(x) + b * math.log1p(-x)
    front = math.exp(log_front)
    # the continued fraction converges fast only below (a+1)/(a+b+2); use symmetry above it
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1.0 - x) / b


def student_t_two_tailed(t: float, df: float) -> float:
    """P(|T| >= |t|) for Student's t with ``df`` degrees of freedom."""
    if math.isinf(t):
        return 0.0
    if t == 0.0:
        return 1.0
    return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t))


class TTestResult(NamedTuple):
    t: float
    df: float
    p: float
    degenerate: bool = False


def _mean_var(xs: Sequence[float]) -> tuple[float, float]:
    n = len(xs)
    mean = math.fsum(xs) / n
    return mean, math.fsum((x - mean) ** 2 for x in xs) / (n - 1)


def welch_t_test(a: Sequence[float], b: Sequence[float]) -> TTestResult:
    """Two-sample, two-tailed, unequal-variance t-test.

    When both samples have zero variance the statistic is undefined; the
    result is flagged ``degenerate`` and reports p = 1 for equal means and
    p = 0 (a significant difference) otherwise.
    """
    na, nb = len(a), len(b)
    if na < 2 or nb < 2:
        raise ValueError(f"each sample needs at least 2 values, got {na} and {nb}")
    ma, va = _mean_var(a)
    mb, vb = _mean_var(b)
    sa, sb = va / na, vb / nb
    se2 = sa + sb
    if se2 == 0.0:
        if ma == mb:
            return TTestResult(0.0, math.nan, 1.0, True)
        return TTestResult(math.copysign(math.inf, ma - mb), math.nan, 0.0, True)
    t = (ma - mb) / math.sqrt(se2)
    # shares of the combined variance keep the squares from underflowing
    ra, rb = sa / se2, sb / se2
    df = 1.0 / (ra * ra / (na - 1) + rb * rb / (nb - 1))
    return TTestResult(t, df, student_t_two_tailed(t, df))


# -- scoring ------------------------------------------------------------------


@dataclass(frozen=True)
class HypervolumeVector:
    of: BalanceObjective
    mutation: Mutation
    instance_id: str
    values: tuple[float, ...]


def pairwise_scores(
    vectors: Mapping[BalanceObjective, Sequence[float] | HypervolumeVector], alpha: float = 0.05
) -> dict[BalanceObjective, int]:
    """Cumulative +1/-1/0 scores from every pairwise Welch test.

    A pair counts only when p < alpha (strict); the objective with the larger
    mean hypervolume gains a point and the other loses one.
    """
    samples = {
        BalanceObjective.parse(of): tuple(v.values if isinstance(v, HypervolumeVector) else v)
        for of, v in vectors.items()
    }
    order = [of for of in ALL_OBJECTIVES if of in samples]
    scores = dict.fromkeys(order, 0)
    for x, y in itertools.combinations(order, 2):
        res = welch_t_test(samples[x], samples[y])
        if res.p < alpha:
            # t has the sign of mean(x) - mean(y)
            winner, loser = (x, y) if res.t > 0 else (y, x)
            scores[winner] += 1
            scores[loser] -= 1
    return scores


Cell = tuple[str, Mutation]


@dataclass
class ScoreTable:
    """Per (instance, mutation) cell: one integer score per balance objective."""

    cells: dict[Cell, dict[BalanceObjective, int]] = field(default_factory=dict)

    def __setitem__(self, cell: Cell, scores: Mapping[BalanceObjective, int]):
        self.cells[cell] = dict(scores)

    def __getitem__(self, cell: Cell) -> dict[BalanceObjective, int]:
        return self.cells[cell]

    def __len__(self):
        return len(self.cells)

    def instances(self, mutation: Mutation) -> list[str]:
        return [inst for inst, mut in self.cells if mut is mutation]

    def mutations(self) -> list[Mutation]:
        return [m for m in Mutation if any(mut is m for _, mut in self.cells)]

    def winners(self, cell: Cell) -> list[BalanceObjective]:
        """Every objective tied at the row maximum."""
        row = self.cells[cell]
        top = max(row.values())
        return [of for of, s in row.items() if s == top]


@dataclass
class HistogramReport:
    wins: dict[Mutation, dict[BalanceObjective, int]]
    n_instances: dict[Mutation, int]


def build_histogram(table: ScoreTable, objectives: Iterable[BalanceObjective] = ALL_OBJECTIVES) -> HistogramReport:
    objectives = tuple(objectives)
    wins: dict[Mutation, dict[BalanceObjective, int]] = {}
    counts: dict[Mutation, int] = {}
    for mutation in table.mutations():
        tally = dict.fromkeys(objectives, 0)
        instances = table.instances(mutation)
        for inst in instances:
            for of in table.winners((inst, mutation)):
                tally[of] += 1
        wins[mutation] = tally
        counts[mutation] = len(instances)
    return HistogramReport(wins, counts)
