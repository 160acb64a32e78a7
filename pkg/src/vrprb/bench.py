"""Benchmark suite generation, experiment orchestration and reporting.

Every (instance, mutation, objective, run) cell gets its own seed derived by
hashing the master seed with the cell's coordinates, so results do not depend
on execution order or on the number of worker processes.
"""

from __future__ import annotations

import csv
import hashlib
import logging
import math
import statistics
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .ea import EaConfig, Mutation, run_ea
from .metrics import archive_hypervolume, reference_point
from .model import Instance, read_instance, write_instance
from .objectives import ALL_OBJECTIVES, BalanceObjective
from .stats import HistogramReport, ScoreTable, build_histogram, pairwise_scores

log = logging.getLogger(__name__)

DEFAULT_BASES = tuple(f"cmt{k:02d}" for k in range(1, 11))
DEFAULT_FLEETS = (2, 3, 4)
DEFAULT_N = 14
SYNTHETIC_SIDE = 100.0


def stable_seed(*parts) -> int:
    """64-bit seed from a blake2b hash of the parts' string forms."""
    key = "|".join(str(p) for p in parts).encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "little")


# -- manifest ---------------------------------------------------------------------


@dataclass(frozen=True)
class ManifestEntry:
    base_id: str
    n: int
    fleet: int
    capacity: float

    def __post_init__(self):
        if self.fleet < 2:
            raise ValueError(f"{self.base_id}: fleet must be at least 2, got {self.fleet}")
        if self.fleet * self.capacity < self.n:
            raise ValueError(f"{self.base_id}: {self.fleet} vehicles of capacity {self.capacity} cannot serve {self.n} unit demands")

    @property
    def instance_id(self) -> str:
        return f"{self.base_id}-n{self.n}-t{self.fleet}-q{self.capacity:g}"


@dataclass
class BenchmarkManifest:
    entries: list[ManifestEntry]
    master_seed: int = 0
    runs: int = 30
    max_iter: int = 30_000


def capacity_variants(n: int, fleet: int) -> tuple[int, int]:
    q = math.ceil(n / fleet)
    return q, q + 1


def default_manifest(bases: Sequence[str] = DEFAULT_BASES, fleets: Sequence[int] = DEFAULT_FLEETS, n: int = DEFAULT_N) -> BenchmarkManifest:
    entries = [
        ManifestEntry(base, n, fleet, cap)
        for base in bases
        for fleet in fleets
        for cap in capacity_variants(n, fleet)
    ]
    return BenchmarkManifest(entries)


def parse_manifest(text: str) -> BenchmarkManifest:
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ValueError(f"manifest line {lineno}: expected 'base_id n fleet capacity', got {raw!r}")
        entries.append(ManifestEntry(parts[0], int(parts[1]), int(parts[2]), float(parts[3])))
    return BenchmarkManifest(entries)


def format_manifest(manifest: BenchmarkManifest) -> str:
    lines = ["# base_id n fleet capacity"]
    lines += [f"{e.base_id} {e.n} {e.fleet} {e.capacity:g}" for e in manifest.entries]
    return "\n".join(lines) + "\n"


# -- instance generation ----------------------------------------------------------


def base_path(bases_dir: Path | None, base_id: str) -> Path | None:
    if bases_dir is None:
        return None
    path = Path(bases_dir) / f"{base_id}.txt"
    return path if path.exists() else None


def _base_coords(bases_dir: Path | None, base_id: str, n: int, master_seed: int) -> tuple[list, bool]:
    path = base_path(bases_dir, base_id)
    if path is not None:
        base = read_instance(path)
        if base.n_clients < n:
            raise ValueError(f"base file {path} has {base.n_clients} clients, need at least {n}")
        return list(base.coords[: n + 1]), False
    rng = np.random.default_rng(stable_seed(master_seed, "base", base_id))
    xy = rng.uniform(0.0, SYNTHETIC_SIDE, size=(n + 1, 2))
    return [tuple(p) for p in xy.tolist()], True


def generate_benchmark(bases_dir: str | Path | None, manifest: BenchmarkManifest) -> list[Instance]:
    """Instances for every manifest entry: depot plus the first ``n`` customers of its base.

    Bases without a file under ``bases_dir`` are replaced by seeded uniform
    coordinates on [0, 100]^2 (logged as synthetic).
    """
    bases_dir = Path(bases_dir) if bases_dir is not None else None
    out = []
    warned = set()
    for e in manifest.entries:
        coords, synthetic = _base_coords(bases_dir, e.base_id, e.n, manifest.master_seed)
        if synthetic and e.base_id not in warned:
            log.warning("base %s not found; using synthetic coordinates", e.base_id)
            warned.add(e.base_id)
        out.append(Instance(e.instance_id, tuple(coords), (0.0,) + (1.0,) * e.n, e.capacity, e.fleet))
    return out


def write_suite(instances: Iterable[Instance], out_dir: str | Path) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for inst in instances:
        path = out_dir / f"{inst.id}.txt"
        write_instance(inst, path)
        paths.append(path)
    return paths


def read_suite(directory: str | Path) -> list[Instance]:
    """All ``*.txt`` instances in ``directory``, in file-name order."""
    paths = sorted(Path(directory).glob("*.txt"))
    if not paths:
        raise FileNotFoundError(f"no instance files in {directory}")
    return [read_instance(p) for p in paths]


# -- profiles -----------------------------------------------------------------------


@dataclass(frozen=True)
class Profile:
    runs: int
    max_iter: int
    n_instances: int | None = None


PROFILES = {
    "full": Profile(runs=30, max_iter=30_000),
    "smoke": Profile(runs=10, max_iter=5_000, n_instances=10),
}


def select_instances(instances: Sequence[Instance], count: int | None) -> list[Instance]:
    """Spread ``count`` picks over the suite, shifting the offset inside each stride.

    On the default 60-instance suite (six variants per base) this takes one
    instance per base and cycles through the fleet/capacity variants.
    """
    if count is None or count >= len(instances):
        return list(instances)
    stride = len(instances) // count
    return [instances[k * stride + k % stride] for k in range(count)]


# -- results store ------------------------------------------------------------------

STORE_COLUMNS = ("instance_id", "mutation", "of_id", "run_index", "seed", "hypervolume", "wall_time")


@dataclass(frozen=True)
class ResultRow:
    instance_id: str
    mutation: Mutation
    of: BalanceObjective
    run_index: int
    seed: int
    hypervolume: float
    wall_time: float

    @property
    def key(self) -> tuple[str, str, str, int]:
        return (self.instance_id, self.mutation.value, self.of.value, self.run_index)

    def to_record(self) -> list[str]:
        return [self.instance_id, self.mutation.value, self.of.value, str(self.run_index), str(self.seed),
                repr(self.hypervolume), f"{self.wall_time:.6f}"]

    @classmethod
    def from_record(cls, rec: dict) -> ResultRow:
        return cls(rec["instance_id"], Mutation.parse(rec["mutation"]), BalanceObjective.parse(rec["of_id"]),
                   int(rec["run_index"]), int(rec["seed"]), float(rec["hypervolume"]), float(rec["wall_time"]))


class ResultsStore:
    """Append-only CSV of per-run hypervolumes.

    Opening an existing file keeps every well-formed row and drops a
    truncated tail left by an interrupted run.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.rows: dict[tuple, ResultRow] = {}
        if self.path.exists():
            self._load()

    def _load(self):
        bad = 0
        with self.path.open(newline="") as fh:
            for rec in csv.DictReader(fh):
                try:
                    row = ResultRow.from_record(rec)
                except (KeyError, TypeError, ValueError):
                    bad += 1
                    continue
                self.rows[row.key] = row
        if bad:
            log.warning("%s: skipped %d malformed rows", self.path, bad)
            self._rewrite()

    def _rewrite(self):
        self.path.parent.mkdir(parents=True, exist_ok=True)
        tmp = self.path.with_suffix(self.path.suffix + ".tmp")
        with tmp.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(STORE_COLUMNS)
            for key in sorted(self.rows):
                w.writerow(self.rows[key].to_record())
        tmp.replace(self.path)

    def __len__(self):
        return len(self.rows)

    def __contains__(self, key) -> bool:
        return key in self.rows

    def __iter__(self):
        return iter(self.sorted_rows())

    def sorted_rows(self) -> list[ResultRow]:
        return [self.rows[k] for k in sorted(self.rows)]

    def append(self, rows: Iterable[ResultRow]) -> None:
        rows = list(rows)
        if not self.path.exists():
            self._rewrite()
        with self.path.open("a", newline="") as fh:
            w = csv.writer(fh)
            for row in rows:
                w.writerow(row.to_record())
                self.rows[row.key] = row

    def finalize(self) -> None:
        """Rewrite in (instance, mutation, objective, run) order."""
        self._rewrite()


# -- experiment -----------------------------------------------------------------------


def _run_cell(instance: Instance, mutation: Mutation, of: BalanceObjective, run_indices: Sequence[int],
              master_seed: int, max_iter: int, backend: str) -> list[ResultRow]:
    ref = reference_point(instance)
    rows = []
    for run in run_indices:
        seed = stable_seed(master_seed, instance.id, of.value, mutation.value, run)
        t0 = time.perf_counter()
        archive = run_ea(instance, EaConfig(of, mutation, max_iter, seed), backend)
        hv = archive_hypervolume(instance, archive, ref)
        rows.append(ResultRow(instance.id, mutation, of, run, seed, hv, time.perf_counter() - t0))
    return rows


def run_experiment(
    instances: Sequence[Instance],
    store: ResultsStore,
    *,
    runs: int = 30,
    max_iter: int = 30_000,
    master_seed: int = 0,
    mutations: Sequence[Mutation] = tuple(Mutation),
    objectives: Sequence[BalanceObjective] = ALL_OBJECTIVES,
    jobs: int = 1,
    backend: str = "compiled",
) -> ResultsStore:
    """Fill ``store`` with one row per (instance, mutation, objective, run); resumable."""
    tasks = []
    for inst in instances:
        for mutation in mutations:
            for of in objectives:
                todo = [r for r in range(runs) if (inst.id, mutation.value, of.value, r) not in store]
                if todo:
                    tasks.append((inst, mutation, of, todo))
    total = sum(len(t[3]) for t in tasks)
    log.info("%d runs to do (%d already stored)", total, len(store))
    done = 0
    if jobs <= 1:
        for inst, mutation, of, todo in tasks:
            store.append(_run_cell(inst, mutation, of, todo, master_seed, max_iter, backend))
            done += len(todo)
            log.debug("%d/%d runs", done, total)
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_run_cell, inst, mutation, of, todo, master_seed, max_iter, backend)
                       for inst, mutation, of, todo in tasks]
            for fut in as_completed(futures):
                rows = fut.result()
                store.append(rows)
                done += len(rows)
                log.debug("%d/%d runs", done, total)
    store.finalize()
    return store


# -- reports ---------------------------------------------------------------------------


@dataclass
class CellSummary:
    instance_id: str
    mutation: Mutation
    of: BalanceObjective
    runs: int
    mean: float
    sd: float


@dataclass
class Report:
    scores: ScoreTable
    histogram: HistogramReport
    summaries: list[CellSummary]
    warnings: list[str] = field(default_factory=list)

    def mean_hv(self, instance_id: str, mutation: Mutation) -> dict[BalanceObjective, float]:
        return {s.of: s.mean for s in self.summaries if s.instance_id == instance_id and s.mutation is mutation}


def build_report(rows: Iterable[ResultRow], alpha: float = 0.05) -> Report:
    grouped: dict[tuple[str, Mutation], dict[BalanceObjective, list[tuple[int, float]]]] = defaultdict(lambda: defaultdict(list))
    for row in rows:
        grouped[(row.instance_id, row.mutation)][row.of].append((row.run_index, row.hypervolume))

    table = ScoreTable()
    summaries, warnings = [], []
    for cell in sorted(grouped, key=lambda c: (c[0], c[1].value)):
        by_of = {of: [hv for _, hv in sorted(v)] for of, v in grouped[cell].items()}
        for of in ALL_OBJECTIVES:
            if of in by_of:
                vals = by_of[of]
                sd = statistics.stdev(vals) if len(vals) > 1 else math.nan
                summaries.append(CellSummary(cell[0], cell[1], of, len(vals), statistics.fmean(vals), sd))
        missing = [of.value for of in ALL_OBJECTIVES if of not in by_of]
        counts = {len(v) for v in by_of.values()}
        if missing or len(counts) != 1 or min(counts) < 2:
            msg = f"{cell[0]} {cell[1].value}: incomplete cell (missing={missing}, run counts={sorted(counts)})"
            log.warning(msg)
            warnings.append(msg)
            continue
        table[cell] = pairwise_scores(by_of, alpha)
    return Report(table, build_histogram(table), summaries, warnings)


def emit_reports(store: ResultsStore | Iterable[ResultRow], out_dir: str | Path, alpha: float = 0.05) -> Report:
    """Write per-mutation score tables, the win histogram and hypervolume summaries."""
    report = build_report(iter(store), alpha)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    names = [of.value for of in ALL_OBJECTIVES]
    for mutation in report.scores.mutations():
        with (out_dir / f"scores_{mutation.value}.csv").open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["instance_id", *names, "winners"])
            for inst in report.scores.instances(mutation):
                row = report.scores[(inst, mutation)]
                winners = ";".join(of.value for of in report.scores.winners((inst, mutation)))
                w.writerow([inst, *(row[of] for of in ALL_OBJECTIVES), winners])

    with (out_dir / "histogram.csv").open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["of_id", "mutation", "wins", "instances"])
        for mutation, tally in report.histogram.wins.items():
            for of, wins in tally.items():
                w.writerow([of.value, mutation.value, wins, report.histogram.n_instances[mutation]])

    with (out_dir / "hv_summary.csv").open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["instance_id", "mutation", "of_id", "runs", "mean", "sd"])
        for s in report.summaries:
            w.writerow([s.instance_id, s.mutation.value, s.of.value, s.runs, repr(s.mean), repr(s.sd)])

    with (out_dir / "warnings.txt").open("w") as fh:
        fh.writelines(m + "\n" for m in report.warnings)
    return report


# -- headline trend -------------------------------------------------------------------------

TOP_GROUP = (BalanceObjective.VAR, BalanceObjective.MAD, BalanceObjective.GINI)


@dataclass
class TrendSummary:
    minmax_top_count: int
    minmax_negative_fraction: float
    top_group_share: dict[Mutation, float]
    minmax_lowest_mean_fraction: float


def trend_summary(report: Report) -> TrendSummary:
    """How strongly a report shows Min-max losing and Var/MAD/Gini winning."""
    mm = BalanceObjective.MIN_MAX
    cells = list(report.scores.cells)
    top_count = sum(mm in report.scores.winners(c) for c in cells)
    negative = sum(report.scores[c][mm] < 0 for c in cells)
    share = {}
    for mutation, tally in report.histogram.wins.items():
        credits = sum(tally.values())
        share[mutation] = sum(tally[of] for of in TOP_GROUP) / credits if credits else math.nan
    lowest = 0
    for inst, mutation in cells:
        means = report.mean_hv(inst, mutation)
        lowest += means[mm] <= min(means.values())
    n = len(cells)
    return TrendSummary(
        minmax_top_count=top_count,
        minmax_negative_fraction=negative / n if n else math.nan,
        top_group_share=share,
        minmax_lowest_mean_fraction=lowest / n if n else math.nan,
    )
