"""Compare observed radii and iteration counts with the worst-case bounds.

For one replicate of each (variant, epsilon, problem) the trace is audited:
the hard checks (iteration split, partition identity, monotonicity) and the
informational ones, which need estimates of the Hessian and gradient
Lipschitz constants (kappa_H from the LSR1 norm bound, kappa_nabla from
finite differences).  Prints a per-variant summary and writes the full
report as JSON.

    python3 scripts/theory_bounds.py --eps 1e-3,1e-5 --out theory.json
"""

import argparse
import collections
import json

from dyntr import bench
from dyntr.audit import audit_theory


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--variants", default=",".join(bench.DEFAULT_VARIANTS))
    ap.add_argument("--eps", default="1e-3,1e-5,1e-7")
    ap.add_argument("--problems", default="all")
    ap.add_argument("--seed-base", type=int, default=42)
    ap.add_argument("--out", default="theory.json")
    args = ap.parse_args(argv)

    spec = bench.CampaignSpec(
        variants=tuple(args.variants.split(",")),
        epsilons=tuple(float(e) for e in args.eps.split(",")),
        replicates=1,
        problems="all" if args.problems == "all" else tuple(args.problems.split(",")),
        seed_base=args.seed_base,
    )
    runs = bench.run_campaign(spec, trace=True)
    report = audit_theory(runs)

    tally = collections.defaultdict(collections.Counter)
    for r in report["runs"]:
        t = tally[r["variant"], r["epsilon"]]
        t["runs"] += 1
        t["hard_fail"] += not r["passed"]
        info = r.get("info", {})
        if "radius_floor_ok" in info:
            t["floor_checked"] += 1
            t["floor_miss"] += not info["radius_floor_ok"]
            t["budget_miss"] += not info["budget_ok"]
    print(f"{'variant':<9} {'eps':>7} {'runs':>5} {'hard':>5} {'floor':>11} {'budget':>7}")
    for (v, e), t in tally.items():
        print(f"{v:<9} {e:>7.0e} {t['runs']:>5} {t['hard_fail']:>5} "
              f"{t['floor_miss']:>4}/{t['floor_checked']:<6} {t['budget_miss']:>7}")

    with open(args.out, "w") as fh:
        json.dump(bench._clean(report), fh, indent=1)


if __name__ == "__main__":
    main()
