"""Full five-variant campaign with in-worker audits and oracle checks.

Writes the results table in all three formats, one JSON line per run and a
short summary of the property counts to ``--outdir``.

    python3 scripts/run_campaign.py --replicates 20 --seed-base 42 --outdir results
"""

import argparse
import json
import os
import sys
import time

from dyntr import bench


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--replicates", type=int, default=20)
    ap.add_argument("--seed-base", type=int, default=42)
    ap.add_argument("--problems", default="all")
    ap.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    ap.add_argument("--outdir", default="results")
    ap.add_argument("--no-audit", action="store_true")
    args = ap.parse_args(argv)

    problems = "all" if args.problems == "all" else tuple(args.problems.split(","))
    spec = bench.CampaignSpec(replicates=args.replicates, seed_base=args.seed_base, problems=problems)
    os.makedirs(args.outdir, exist_ok=True)

    def progress(i, n):
        if i % 30 == 0 or i == n:
            print(f"  {i}/{n} tasks  {time.perf_counter() - t0:7.1f}s", file=sys.stderr, flush=True)

    t0 = time.perf_counter()
    audit = not args.no_audit
    records = bench.run_campaign(spec, workers=args.workers, audit=audit, check=audit, progress=progress)
    elapsed = time.perf_counter() - t0

    rows = bench.aggregate(records)
    for fmt, ext in (("markdown", "md"), ("csv", "csv"), ("json", "json")):
        with open(os.path.join(args.outdir, f"table.{ext}"), "w") as fh:
            fh.write(bench.emit(rows, fmt))
    with open(os.path.join(args.outdir, "runs.jsonl"), "w") as fh:
        for r in records:
            fh.write(json.dumps(bench._clean(r)) + "\n")

    summary = bench.CampaignSummary.from_records(records)
    info = {"elapsed_s": elapsed, "n_runs": summary.n_runs,
            "soundness_violations": summary.soundness_violations,
            "audit_failures": summary.audit_failures, "checks": summary.checks}
    with open(os.path.join(args.outdir, "summary.json"), "w") as fh:
        json.dump(info, fh, indent=2)
    print(bench.emit(rows, "markdown"))
    print(json.dumps(info, indent=2))


if __name__ == "__main__":
    main()
