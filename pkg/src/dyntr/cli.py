"""Command line entry point: ``bench run``, ``bench problems list``, ``bench audit``."""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import bench
from .audit import audit_theory
from .problems import catalog

EXIT_OK, EXIT_USAGE, EXIT_AUDIT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for audit failures here
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _csv_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bench", description="Dynamic-accuracy trust-region benchmark.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    run = sub.add_parser("run", help="run a campaign and print or write the results table")
    run.add_argument("--variants", default=",".join(bench.DEFAULT_VARIANTS))
    run.add_argument("--eps", default="1e-3,1e-5,1e-7")
    run.add_argument("--replicates", type=int, default=20)
    run.add_argument("--problems", default="all")
    run.add_argument("--seed-base", type=int, default=0)
    run.add_argument("--format", default="md", choices=["md", "markdown", "csv", "json"])
    run.add_argument("--out", help="output file (default: stdout)")
    run.add_argument("--trace", nargs="?", const="traces.jsonl", default=None, metavar="PATH",
                     help="write per-iteration records as JSON lines (default PATH: traces.jsonl)")
    run.add_argument("--records", metavar="PATH", help="also write one JSON line per run")
    run.add_argument("--workers", type=int, default=1)
    run.add_argument("--quiet", action="store_true")

    probs = sub.add_parser("problems", help="test problem catalogue")
    probs.add_argument("action", choices=["list"])

    audit = sub.add_parser("audit", help="audit a JSON-lines trace file")
    audit.add_argument("--in", dest="path", required=True)
    audit.add_argument("--verbose", action="store_true")
    return p


def _cmd_run(args) -> int:
    try:
        eps = [float(e) for e in _csv_list(args.eps)]
        problems = "all" if args.problems == "all" else tuple(_csv_list(args.problems))
        spec = bench.CampaignSpec(
            variants=tuple(_csv_list(args.variants)),
            epsilons=tuple(eps),
            replicates=args.replicates,
            problems=problems,
            seed_base=args.seed_base,
            fmt="markdown" if args.format == "md" else args.format,
        )
    except ValueError as exc:
        print(f"bench run: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.workers < 1:
        print("bench run: --workers must be positive", file=sys.stderr)
        return EXIT_USAGE

    def progress(i, n):
        if not args.quiet and (i == n or i % 25 == 0):
            print(f"\r{i}/{n} tasks", end="" if i < n else "\n", file=sys.stderr, flush=True)

    t0 = time.perf_counter()
    records = bench.run_campaign(spec, workers=args.workers, trace=bool(args.trace), progress=progress)
    if not args.quiet:
        print(f"{len(records)} runs in {time.perf_counter() - t0:.1f}s", file=sys.stderr)
    text = bench.emit(bench.aggregate(records), spec.fmt)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.trace:
        bench.write_traces(records, args.trace)
    if args.records:
        with open(args.records, "w") as fh:
            for r in records:
                fh.write(json.dumps(bench._clean({k: v for k, v in r.items() if k != "trace"})) + "\n")
    return EXIT_OK


def _cmd_problems(args) -> int:
    print(f"{'name':<10} {'n':>4}")
    for p in catalog():
        print(f"{p.name:<10} {p.dim:>4}")
    return EXIT_OK


def _cmd_audit(args) -> int:
    try:
        runs = bench.read_traces(args.path)
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"bench audit: cannot read {args.path}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not runs:
        print(f"bench audit: no trace records in {args.path}", file=sys.stderr)
        return EXIT_USAGE
    try:
        report = audit_theory(runs)
    except (ValueError, KeyError) as exc:
        print(f"bench audit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for r in report["runs"]:
        if args.verbose or not r["passed"]:
            print(f"{'ok  ' if r['passed'] else 'FAIL'} {r['problem']:<10} {r['variant']:<8} "
                  f"eps={r['epsilon']:.0e} k={r['k']} S={r['n_successful']} U={r['n_unsuccessful']} "
                  f"split_viol={r['split_violations']} monotone_viol={r['monotone_violations']}")
    print(f"{report['n_runs']} runs audited, {report['n_failed']} failed")
    return EXIT_OK if report["passed"] else EXIT_AUDIT


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    handler = {"run": _cmd_run, "problems": _cmd_problems, "audit": _cmd_audit}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
