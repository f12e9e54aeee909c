"""Acceptance gate: the full default campaign plus the property suites.

Each criterion prints one PASS/FAIL line (collected again in the terminal
summary).  The campaign runs once per session; it is marked ``slow``.
"""

import os
import time

import pytest

from conftest import ACCEPTANCE_LINES
from dyntr import bench
from dyntr.problems import catalog, fd_error

pytestmark = pytest.mark.slow

TIME_BUDGET_S = 600.0
DYNAMIC_OR_EXACT = ("lmqn", "ilmqn-a", "ilmqn-b")


def report(tag, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  {tag:<28} {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


@pytest.fixture(scope="session")
def campaign():
    spec = bench.CampaignSpec(replicates=20, seed_base=42)
    t0 = time.perf_counter()
    records = bench.run_campaign(spec, workers=os.cpu_count() or 1, audit=True, check=True)
    elapsed = time.perf_counter() - t0
    rows = {(r.epsilon, r.variant): r for r in bench.aggregate(records)}
    return records, rows, elapsed


def frac(rows, eps, variant):
    return rows[(eps, variant)].success_fraction


def test_campaign_size_and_runtime(campaign):
    records, _, elapsed = campaign
    ok = len(records) == 5 * 3 * 42 * 20 and elapsed < TIME_BUDGET_S
    assert report("0 runtime", ok, f"{len(records)} runs in {elapsed:.0f}s (budget {TIME_BUDGET_S:.0f}s)")


def test_1_lmqn_robustness(campaign):
    _, rows, _ = campaign
    a, b = frac(rows, 1e-3, "lmqn"), frac(rows, 1e-5, "lmqn")
    ratios = [rows[(e, "lmqn")].mean_costf / rows[(e, "lmqn")].mean_its for e in bench.DEFAULT_EPSILONS]
    ok = a >= 0.90 and b >= 0.85 and all(1.0 <= q <= 1.2 for q in ratios)
    assert report("1 lmqn robustness", ok,
                  f"succ {a:.3f}@1e-3 {b:.3f}@1e-5; costf/its {', '.join(f'{q:.3f}' for q in ratios)}")


def test_2_fixed_precision_collapse(campaign):
    _, rows, _ = campaign
    h3, h5 = frac(rows, 1e-3, "lmqn-h"), frac(rows, 1e-5, "lmqn-h")
    s7, l7 = frac(rows, 1e-7, "lmqn-s"), frac(rows, 1e-7, "lmqn")
    ok = h3 <= 0.45 and h5 <= 0.25 and s7 <= 0.6 * l7
    assert report("2 fixed-precision collapse", ok,
                  f"lmqn-h {h3:.3f}@1e-3 {h5:.3f}@1e-5; lmqn-s {s7:.3f} vs 0.6*{l7:.3f}@1e-7")


def test_3_adaptive_savings(campaign):
    _, rows, _ = campaign
    r = rows[(1e-3, "ilmqn-a")]
    base = frac(rows, 1e-3, "lmqn")
    ok = (r.success_fraction >= 0.85 * base and r.rel_costf <= 0.45
          and r.rel_costg <= 0.35 and r.rel_its <= 1.6)
    assert report("3 adaptive savings", ok,
                  f"succ {r.success_fraction:.3f} vs 0.85*{base:.3f}; rel_costf {r.rel_costf:.3f} "
                  f"rel_costg {r.rel_costg:.3f} rel_its {r.rel_its:.3f}")


def test_4_gradient_dominance(campaign):
    _, rows, _ = campaign
    parts, ok = [], True
    for eps in bench.DEFAULT_EPSILONS:
        r = rows[(eps, "ilmqn-b")]
        if r.success_fraction >= 0.4:
            ok &= r.rel_costg <= 0.25
            parts.append(f"{r.rel_costg:.3f}@{eps:g}")
        else:
            parts.append(f"skip@{eps:g} (succ {r.success_fraction:.2f})")
    assert report("4 ilmqn-b gradient cost", ok, "rel_costg " + " ".join(parts))


def test_5_savings_erosion(campaign):
    _, rows, _ = campaign
    r = rows[(1e-7, "ilmqn-a")]
    ok = r.rel_costf >= 0.7 and r.rel_costg <= 0.9
    assert report("5 savings erosion", ok, f"rel_costf {r.rel_costf:.3f} rel_costg {r.rel_costg:.3f}")


def test_6_soundness(campaign):
    records, _, _ = campaign
    conv = [r for r in records if r["variant"] in DYNAMIC_OR_EXACT and r["status"] == "converged"]
    bad = sum(not r["exact_grad_norm_final"] <= r["epsilon"] for r in conv)
    assert report("6 soundness", bad == 0 and conv, f"{bad} violations over {len(conv)} converged runs")


def test_7_oracle_contracts(campaign):
    records, _, _ = campaign
    c = bench.CampaignSummary.from_records(records).checks
    calls = c["f_calls"] + c["g_calls"]
    bad = c["f_violations"] + c["g_violations"]
    ok = bad == 0 and calls >= 100_000
    assert report("7 oracle contracts", ok, f"{bad} violations over {calls} calls")


def test_8_cauchy_decrease(campaign):
    records, _, _ = campaign
    c = bench.CampaignSummary.from_records(records).checks
    ok = c["cauchy_violations"] == 0 and c["cauchy_checks"] > 0
    assert report("8 cauchy decrease", ok, f"{c['cauchy_violations']} violations over {c['cauchy_checks']} steps")


def test_9_monotonicity(campaign):
    records, _, _ = campaign
    audited = [r for r in records if r["variant"] in DYNAMIC_OR_EXACT]
    bad = sum(r["audit"]["monotone_violations"] for r in audited)
    assert report("9 monotonicity", bad == 0, f"{bad} exact-f increases over {len(audited)} runs")


def test_10_iteration_split(campaign):
    records, _, _ = campaign
    split = sum(r["audit"]["split_violations"] for r in records)
    part = sum(not r["audit"]["partition_ok"] for r in records)
    ok = split == 0 and part == 0
    assert report("10 iteration split", ok, f"{split} bound violations, {part} partition errors, {len(records)} runs")


def test_11_derivatives():
    bad = []
    for p in catalog():
        err = fd_error(p, p.x0)
        if not err <= p.fd_rtol:
            bad.append(f"{p.name}:{err:.1e}")
    assert report("11 derivatives", not bad and len(catalog()) == 42,
                  f"{42 - len(bad)}/42 pass" + (f" ({', '.join(bad)})" if bad else ""))


def test_12_determinism():
    spec = bench.CampaignSpec(replicates=2, seed_base=42,
                              problems=("rosenbr", "beale", "watson", "cliff", "box", "tridia"))
    a = bench.emit(bench.aggregate(bench.run_campaign(spec)), "csv").encode()
    b = bench.emit(bench.aggregate(bench.run_campaign(spec, workers=2)), "csv").encode()
    assert report("12 determinism", a == b, f"{len(a)} CSV bytes, identical={a == b}")
