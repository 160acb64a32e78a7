"""Command line: ``vrprb generate | run | report``."""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

from . import bench


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def cmd_generate(args) -> int:
    if args.manifest:
        manifest = bench.parse_manifest(Path(args.manifest).read_text())
    else:
        manifest = bench.default_manifest()
    manifest.master_seed = args.seed
    instances = bench.generate_benchmark(args.bases, manifest)
    bench.write_suite(instances, args.out)
    out = Path(args.out)
    (out / "manifest.conf").write_text(bench.format_manifest(manifest))
    with (out / "sources.csv").open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["instance_id", "base_id", "synthetic"])
        for e in manifest.entries:
            synthetic = bench.base_path(Path(args.bases) if args.bases else None, e.base_id) is None
            w.writerow([e.instance_id, e.base_id, int(synthetic)])
    print(f"wrote {len(instances)} instances to {out}")
    return 0


def cmd_run(args) -> int:
    profile = bench.PROFILES[args.profile]
    instances = bench.select_instances(bench.read_suite(args.instances), profile.n_instances)
    store = bench.ResultsStore(args.store)
    bench.run_experiment(
        instances,
        store,
        runs=args.runs or profile.runs,
        max_iter=args.max_iter or profile.max_iter,
        master_seed=args.seed,
        jobs=args.jobs,
        backend=args.backend,
    )
    print(f"{len(store)} rows in {store.path}")
    return 0


def cmd_report(args) -> int:
    store = bench.ResultsStore(args.store)
    if not len(store):
        print(f"{args.store}: no results", file=sys.stderr)
        return 1
    report = bench.emit_reports(store, args.out, alpha=args.alpha)
    trend = bench.trend_summary(report)
    for mutation, tally in report.histogram.wins.items():
        wins = " ".join(f"{of.value}={n}" for of, n in tally.items())
        print(f"{mutation.value:8s} top-score counts over {report.histogram.n_instances[mutation]} instances: {wins}")
    print(f"min-max top scores: {trend.minmax_top_count}; negative in {trend.minmax_negative_fraction:.1%} of cells; "
          f"lowest mean hypervolume in {trend.minmax_lowest_mean_fraction:.1%} of cells")
    if report.warnings:
        print(f"{len(report.warnings)} incomplete cells omitted (see warnings.txt)", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vrprb", description="Route-balancing objective benchmark")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="build the instance suite")
    g.add_argument("--bases", help="directory of <base_id>.txt coordinate files (missing bases become synthetic)")
    g.add_argument("--manifest", help="manifest file; default is the 60-instance suite")
    g.add_argument("--out", required=True)
    g.add_argument("--seed", type=_u64, default=0, help="seed for synthetic bases")
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("run", help="run the EA over every configuration")
    r.add_argument("--instances", required=True)
    r.add_argument("--profile", choices=sorted(bench.PROFILES), default="full")
    r.add_argument("--seed", type=_u64, default=0)
    r.add_argument("--jobs", type=int, default=1)
    r.add_argument("--store", required=True)
    r.add_argument("--runs", type=int, help="override the profile's run count")
    r.add_argument("--max-iter", type=int, help="override the profile's iteration budget")
    r.add_argument("--backend", choices=("compiled", "python"), default="compiled")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("report", help="score tables and histogram from a results store")
    s.add_argument("--store", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--alpha", type=float, default=0.05)
    s.set_defaults(func=cmd_report)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
