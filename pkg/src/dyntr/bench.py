"""Benchmark campaigns: run the variants over the test set, aggregate, emit tables."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .audit import audit_run
from .problems import get_problem, problem_names
from .solver import SolverConfig, Variant, record_to_dict, solve

DEFAULT_VARIANTS = ("lmqn", "lmqn-s", "lmqn-h", "ilmqn-a", "ilmqn-b")
DEFAULT_EPSILONS = (1e-3, 1e-5, 1e-7)
FORMATS = ("markdown", "csv", "json")
BASELINE = "lmqn"


@dataclass(frozen=True)
class CampaignSpec:
    variants: tuple = DEFAULT_VARIANTS
    epsilons: tuple = DEFAULT_EPSILONS
    replicates: int = 20
    problems: tuple | str = "all"
    seed_base: int = 0
    fmt: str = "markdown"

    def __post_init__(self):
        object.__setattr__(self, "variants", tuple(Variant(v).value for v in self.variants))
        object.__setattr__(self, "epsilons", tuple(float(e) for e in self.epsilons))
        if self.replicates < 1:
            raise ValueError("replicates must be at least 1")
        if not self.variants or not self.epsilons:
            raise ValueError("need at least one variant and one epsilon")
        if any(not 0 < e <= 1 for e in self.epsilons):
            raise ValueError("epsilons must lie in (0, 1]")
        if self.fmt not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")
        if self.problems != "all":
            names = tuple(self.problems)
            unknown = sorted(set(names) - set(problem_names()))
            if unknown:
                raise ValueError(f"unknown problems: {', '.join(unknown)}")
            object.__setattr__(self, "problems", names)

    @property
    def problem_list(self) -> tuple:
        return tuple(problem_names()) if self.problems == "all" else self.problems


def derive_seed(seed_base: int, problem: str, variant: str, epsilon: float, replicate: int) -> int:
    """Stable 63-bit seed; independent of run order and of the other runs."""
    key = f"{int(seed_base)}|{problem}|{Variant(variant).value}|{float(epsilon)!r}|{int(replicate)}"
    digest = hashlib.blake2b(key.encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little") >> 1


@dataclass(frozen=True)
class _Task:
    problem: str
    variant: str
    epsilon: float
    replicates: tuple  # (replicate, seed) pairs sharing one solve when deterministic
    trace: bool
    audit: bool
    check: bool
    config: dict


def _run_task(task: _Task) -> list[dict]:
    problem = get_problem(task.problem)
    cfg = SolverConfig(variant=task.variant, epsilon=task.epsilon, **task.config)
    # a deterministic variant gives the same run for every seed
    share = Variant(task.variant) is Variant.LMQN
    out = []
    result = None
    for rep, seed in task.replicates:
        if result is None or not share:
            result = solve(problem, cfg, seed, trace=task.trace or task.audit, check=task.check)
        rec = result.to_record()
        rec["seed"] = seed
        rec["replicate"] = rep
        if task.audit:
            rep_audit = audit_run(result.trace, cfg)
            rec["audit"] = {k: rep_audit[k] for k in
                            ("k", "n_successful", "n_unsuccessful", "partition_ok",
                             "split_violations", "monotone_violations", "flag_mismatches", "passed")}
        if task.trace:
            rec["trace"] = [record_to_dict(r) for r in result.trace]
        out.append(rec)
    return out


def run_campaign(spec: CampaignSpec, *, workers: int = 1, trace: bool = False,
                 audit: bool = False, check: bool = False, config: dict | None = None,
                 progress=None) -> list[dict]:
    """Solve every (variant, epsilon, problem, replicate) combination.

    Records come back in a fixed order regardless of ``workers``.  ``audit``
    runs the trace audits inside the workers and keeps only their summary;
    ``trace`` keeps the full iteration records.  ``config`` holds extra
    :class:`SolverConfig` fields.
    """
    config = dict(config or {})
    tasks = []
    for variant in spec.variants:
        for eps in spec.epsilons:
            for name in spec.problem_list:
                reps = tuple((r, derive_seed(spec.seed_base, name, variant, eps, r))
                             for r in range(spec.replicates))
                tasks.append(_Task(name, variant, eps, reps, trace, audit, check, config))

    records: list[dict] = []
    if workers <= 1:
        for i, t in enumerate(tasks):
            records.extend(_run_task(t))
            if progress:
                progress(i + 1, len(tasks))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for i, chunk in enumerate(pool.map(_run_task, tasks, chunksize=4)):
                records.extend(chunk)
                if progress:
                    progress(i + 1, len(tasks))
    return records


@dataclass
class AggregateRow:
    epsilon: float
    variant: str
    nsucc: int
    nprob: int
    mean_its: float
    mean_costf: float
    mean_costg: float
    rel_its: float | None = None
    rel_costf: float | None = None
    rel_costg: float | None = None

    @property
    def success_fraction(self) -> float:
        return self.nsucc / self.nprob if self.nprob else math.nan


def _per_problem(records):
    """(eps, variant) -> problem -> per-problem means, or None when not solved."""
    groups = defaultdict(lambda: defaultdict(list))
    for r in records:
        groups[(float(r["epsilon"]), r["variant"])][r["problem"]].append(r)
    table = {}
    for key, by_prob in groups.items():
        solved = {}
        for name, runs in by_prob.items():
            ok = [r for r in runs if r["success"]]
            if 2 * len(ok) >= len(runs):
                solved[name] = (
                    float(np.mean([r["iterations"] for r in ok])),
                    float(np.mean([r["costf"] for r in ok])),
                    float(np.mean([r["costg"] for r in ok])),
                )
            else:
                solved[name] = None
        table[key] = solved
    return table


def aggregate(records, baseline: str = BASELINE) -> list[AggregateRow]:
    """Table rows, one per (epsilon, variant).

    A problem counts as solved when at least half of its replicates succeed;
    means are taken over successful runs of each solved problem and then
    averaged over problems.  ``rel_*`` compare against ``baseline`` on the
    problems solved by both.
    """
    records = list(records)
    if not records:
        raise ValueError("no records to aggregate")
    table = _per_problem(records)
    order = {v: i for i, v in enumerate(DEFAULT_VARIANTS)}
    keys = sorted(table, key=lambda k: (-k[0], order.get(k[1], len(order)), k[1]))
    rows = []
    for eps, variant in keys:
        solved = table[(eps, variant)]
        good = sorted(n for n, v in solved.items() if v is not None)
        means = [float(np.mean([solved[n][i] for n in good])) if good else math.nan for i in range(3)]
        row = AggregateRow(eps, variant, len(good), len(solved), *means)
        base = table.get((eps, baseline))
        if variant != baseline and base is not None:
            both = [n for n in good if base.get(n) is not None]
            if both:
                rel = []
                for i in range(3):
                    num = np.mean([solved[n][i] for n in both])
                    den = np.mean([base[n][i] for n in both])
                    rel.append(float(num / den) if den else math.nan)
                row.rel_its, row.rel_costf, row.rel_costg = rel
        rows.append(row)
    return rows


COLUMNS = ("eps", "Variant", "nsucc", "its.", "costf", "costg", "rel. its.", "rel. costf", "rel. costg")
CSV_FIELDS = [f.name for f in fields(AggregateRow)]


def _label(variant: str) -> str:
    try:
        return Variant(variant).label
    except ValueError:
        return variant


def _fmt(v, spec: str = ".2f") -> str:
    if v is None:
        return ""
    return "nan" if isinstance(v, float) and math.isnan(v) else format(v, spec)


def _markdown(rows) -> str:
    lines = ["| " + " | ".join(COLUMNS) + " |", "|" + "---|" * len(COLUMNS)]
    last_eps = None
    for r in rows:
        eps = f"{r.epsilon:.0e}" if r.epsilon != last_eps else ""
        last_eps = r.epsilon
        cells = [eps, _label(r.variant), f"{r.nsucc}/{r.nprob}", _fmt(r.mean_its), _fmt(r.mean_costf),
                 _fmt(r.mean_costg), _fmt(r.rel_its), _fmt(r.rel_costf), _fmt(r.rel_costg)]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def _csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in rows:
        w.writerow(["" if v is None else repr(v) if isinstance(v, float) else v
                    for v in (getattr(r, f) for f in CSV_FIELDS)])
    return buf.getvalue()


def parse_csv(text: str) -> list[AggregateRow]:
    """Inverse of ``emit(rows, "csv")``."""
    rows = []
    for d in csv.DictReader(io.StringIO(text)):
        rows.append(AggregateRow(
            epsilon=float(d["epsilon"]),
            variant=d["variant"],
            nsucc=int(d["nsucc"]),
            nprob=int(d["nprob"]),
            mean_its=float(d["mean_its"]),
            mean_costf=float(d["mean_costf"]),
            mean_costg=float(d["mean_costg"]),
            rel_its=float(d["rel_its"]) if d["rel_its"] else None,
            rel_costf=float(d["rel_costf"]) if d["rel_costf"] else None,
            rel_costg=float(d["rel_costg"]) if d["rel_costg"] else None,
        ))
    return rows


def plot_data(rows) -> dict:
    """Grouped-bar data: reliability and iterations, then energy savings."""
    epsilons = sorted({r.epsilon for r in rows}, reverse=True)
    by_key = {(r.epsilon, r.variant): r for r in rows}
    variants = list(dict.fromkeys(r.variant for r in rows))

    def series(v, attr):
        out = []
        for e in epsilons:
            r = by_key.get((e, v))
            if r is None:
                out.append(None)
            elif attr == "success_ratio":
                out.append(r.success_fraction)
            else:
                val = getattr(r, attr)
                out.append(1.0 if val is None and v == BASELINE else val)
        return out

    return {
        "epsilons": epsilons,
        "reliability_and_iterations": {
            _label(v): {"success_ratio": series(v, "success_ratio"), "rel_its": series(v, "rel_its")}
            for v in variants
        },
        "energy_savings": {
            _label(v): {"rel_costf": series(v, "rel_costf"), "rel_costg": series(v, "rel_costg")}
            for v in variants
        },
    }


def _clean(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_clean(v) for v in obj]
    return obj


def emit(rows, fmt: str = "markdown") -> str:
    rows = list(rows)
    if fmt in ("md", "markdown"):
        return _markdown(rows)
    if fmt == "csv":
        return _csv(rows)
    if fmt == "json":
        payload = {"rows": [asdict(r) for r in rows], "plots": plot_data(rows)}
        return json.dumps(_clean(payload), indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def write_traces(records, path: str | os.PathLike) -> int:
    """Write one JSON line per iteration, tagged with its run; returns the count."""
    n = 0
    with open(path, "w") as fh:
        for rec in records:
            tag = {k: rec[k] for k in ("problem", "variant", "epsilon", "seed", "replicate")}
            for it in rec.get("trace", ()):
                fh.write(json.dumps(_clean({**tag, **it})) + "\n")
                n += 1
    return n


def read_traces(path: str | os.PathLike) -> list[dict]:
    """Group trace lines back into runs (``problem``/``variant``/... plus ``trace``)."""
    runs: dict = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            d = json.loads(line)
            key = (d.pop("problem"), d.pop("variant"), d.pop("epsilon"), d.pop("seed"), d.pop("replicate", 0))
            if d.get("rho") is None:
                d["rho"] = -math.inf
            if d.get("exact_f_trial") is None:
                d["exact_f_trial"] = math.inf
            runs.setdefault(key, []).append(d)
    return [
        {"problem": p, "variant": v, "epsilon": e, "seed": s, "replicate": r,
         "trace": sorted(t, key=lambda it: it["k"])}
        for (p, v, e, s, r), t in runs.items()
    ]


@dataclass
class CampaignSummary:
    """Campaign-wide property counts gathered from per-run records."""

    n_runs: int = 0
    soundness_violations: int = 0
    audit_failures: int = 0
    checks: dict = field(default_factory=lambda: defaultdict(int))

    @classmethod
    def from_records(cls, records) -> "CampaignSummary":
        s = cls()
        for r in records:
            s.n_runs += 1
            if r["status"] == "converged" and Variant(r["variant"]) in (
                    Variant.LMQN, Variant.ILMQN_A, Variant.ILMQN_B) and not r["exact_grad_norm_final"] <= r["epsilon"]:
                s.soundness_violations += 1
            if "audit" in r and not r["audit"]["passed"]:
                s.audit_failures += 1
            for k, v in r.get("checks", {}).items():
                s.checks[k] += v
        s.checks = dict(s.checks)
        return s
