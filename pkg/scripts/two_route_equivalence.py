"""Show that order-equivalent balance objectives build identical archives.

On a two-route solution All-min, Max-min, Var and MAD are all increasing
functions of |l1 - l2|, so a (1+1) EA driven by the same seed accepts the same
mutants under each of them. Var can drift only through rounding of its
mean-of-squares form. Runs every two-route instance of the default suite.

    python scripts/two_route_equivalence.py [--iters 30000] [--seeds 3]
"""

import argparse
import logging

from vrprb import bench
from vrprb.ea import EaConfig, Mutation, run_ea
from vrprb.objectives import BalanceObjective as OF

OTHERS = (OF.ALL_MIN, OF.VAR, OF.MAD)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--iters", type=int, default=30_000)
    ap.add_argument("--seeds", type=int, default=3)
    args = ap.parse_args()
    logging.basicConfig(level=logging.ERROR)

    suite = [i for i in bench.generate_benchmark(None, bench.default_manifest()) if i.fleet_hint == 2]
    same = dict.fromkeys(OTHERS, 0)
    total = 0
    for inst in suite:
        for mutation in Mutation:
            for seed in range(args.seeds):
                ref = run_ea(inst, EaConfig(OF.MAX_MIN, mutation, args.iters, seed)).solutions
                total += 1
                for of in OTHERS:
                    same[of] += run_ea(inst, EaConfig(of, mutation, args.iters, seed)).solutions == ref
    print(f"{len(suite)} two-route instances, {total} seeded runs per objective")
    for of, n in same.items():
        print(f"  {of.value:8s} archive identical to max-min in {n}/{total} runs")


if __name__ == "__main__":
    main()
