"""Generate the default suite, run one profile, write reports and the trend summary.

    python scripts/run_profile.py smoke            # ~10 s
    python scripts/run_profile.py full --jobs 4    # ~10 min

Outputs go to results/<profile>/ (store.csv, score tables, histogram).
Re-running resumes from an existing store.
"""

import argparse
import logging
from pathlib import Path

from vrprb import bench


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("profile", choices=sorted(bench.PROFILES))
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", type=Path, default=Path("results"))
    args = ap.parse_args()
    logging.basicConfig(level=logging.ERROR)

    profile = bench.PROFILES[args.profile]
    manifest = bench.default_manifest()
    manifest.master_seed = args.seed
    suite = bench.select_instances(bench.generate_benchmark(None, manifest), profile.n_instances)
    out = args.out / args.profile
    store = bench.run_experiment(suite, bench.ResultsStore(out / "store.csv"), runs=profile.runs,
                                 max_iter=profile.max_iter, master_seed=args.seed, jobs=args.jobs)
    report = bench.emit_reports(store, out)
    trend = bench.trend_summary(report)

    print(f"{len(store)} runs over {len(suite)} instances -> {out}")
    for mutation, tally in report.histogram.wins.items():
        print(f"  {mutation.value:8s} wins: " + " ".join(f"{of.value}={n}" for of, n in tally.items()))
    print(f"  min-max: top score in {trend.minmax_top_count} cells, negative in "
          f"{trend.minmax_negative_fraction:.1%}, lowest mean hypervolume in {trend.minmax_lowest_mean_fraction:.1%}")
    for mutation, share in trend.top_group_share.items():
        print(f"  {mutation.value:8s} var+mad+gini share of top-score credits: {share:.1%}")


if __name__ == "__main__":
    main()
