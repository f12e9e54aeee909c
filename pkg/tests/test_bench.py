import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dyntr.bench import (
    AggregateRow,
    CampaignSpec,
    aggregate,
    derive_seed,
    emit,
    parse_csv,
    plot_data,
    read_traces,
    run_campaign,
    write_traces,
)

SMALL = CampaignSpec(variants=("lmqn", "ilmqn-a"), epsilons=(1e-3,), replicates=3,
                     problems=("rosenbr", "beale"), seed_base=7)


@pytest.fixture(scope="module")
def small_records():
    return run_campaign(SMALL)


def rec(problem, variant, its, costf, costg, success=True, eps=1e-3):
    return dict(problem=problem, variant=variant, epsilon=eps, iterations=its,
                costf=costf, costg=costg, success=success)


def test_cardinality():
    spec = CampaignSpec(variants=("lmqn",), epsilons=(1e-3,), replicates=3, problems=("rosenbr", "beale"))
    assert len(run_campaign(spec)) == 6


def test_spec_validation():
    with pytest.raises(ValueError):
        CampaignSpec(problems=("nosuch",))
    with pytest.raises(ValueError):
        CampaignSpec(replicates=0)
    with pytest.raises(ValueError):
        CampaignSpec(epsilons=(2.0,))
    with pytest.raises(ValueError):
        CampaignSpec(variants=("bfgs",))


def test_seeds_are_stable_and_distinct():
    a = derive_seed(42, "rosenbr", "ilmqn-a", 1e-3, 0)
    assert a == derive_seed(42, "rosenbr", "ilmqn-a", 1e-3, 0)
    others = {derive_seed(42, "rosenbr", "ilmqn-a", 1e-3, 1), derive_seed(42, "rosenbr", "ilmqn-b", 1e-3, 0),
              derive_seed(43, "rosenbr", "ilmqn-a", 1e-3, 0), derive_seed(42, "beale", "ilmqn-a", 1e-3, 0),
              derive_seed(42, "rosenbr", "ilmqn-a", 1e-5, 0)}
    assert a not in others and len(others) == 5
    assert 0 <= a < 2**63


def test_adding_a_variant_does_not_change_the_others(small_records):
    wider = CampaignSpec(variants=("lmqn", "ilmqn-a", "ilmqn-b"), epsilons=(1e-3,), replicates=3,
                         problems=("rosenbr", "beale"), seed_base=7)
    recs = [r for r in run_campaign(wider) if r["variant"] != "ilmqn-b"]
    assert recs == small_records


def test_determinism_and_worker_independence(small_records):
    again = run_campaign(SMALL, workers=2)
    assert again == small_records
    assert emit(aggregate(again), "csv") == emit(aggregate(small_records), "csv")
    assert emit(aggregate(again), "json") == emit(aggregate(small_records), "json")


def test_aggregate_simple_example():
    rows = aggregate([rec("p", "lmqn", 10, 11, 11)] * 4)
    assert len(rows) == 1
    r = rows[0]
    assert (r.nsucc, r.mean_its, r.mean_costf) == (1, 10, 11)
    assert r.rel_its is None


def test_majority_rule_and_intersection():
    records = (
        [rec("a", "lmqn", 10, 11, 5)] * 2
        + [rec("b", "lmqn", 20, 21, 10)] * 2
        + [rec("a", "ilmqn-a", 20, 5, 1)] * 2
        # b: one of two replicates succeeds, which still counts
        + [rec("b", "ilmqn-a", 40, 7, 2), rec("b", "ilmqn-a", 999, 999, 999, success=False)]
        # c: solved by the variant only, so left out of the ratios
        + [rec("c", "lmqn", 1, 1, 1, success=False)] * 2
        + [rec("c", "ilmqn-a", 100, 1, 1), rec("c", "ilmqn-a", 1, 1, 1, success=False),
           rec("c", "ilmqn-a", 1, 1, 1, success=False)]
    )
    base, var = aggregate(records)
    assert base.variant == "lmqn" and base.nsucc == 2 and base.nprob == 3
    assert var.nsucc == 2
    assert var.mean_its == 30
    assert var.rel_its == pytest.approx(30 / 15)
    assert var.rel_costf == pytest.approx(6 / 16)
    assert var.rel_costg == pytest.approx(1.5 / 7.5)


def test_self_ratio_is_one(small_records):
    clone = [dict(r, variant="lmqn-s") for r in small_records if r["variant"] == "lmqn"]
    rows = aggregate([r for r in small_records if r["variant"] == "lmqn"] + clone)
    other = [r for r in rows if r.variant == "lmqn-s"][0]
    assert other.rel_its == other.rel_costf == other.rel_costg == 1.0


@given(st.permutations(list(range(8))))
def test_aggregation_is_permutation_invariant(perm):
    base = [rec(p, v, i + 1, i + 2, i + 3, success=(i % 3 != 0))
            for i, (p, v) in enumerate([(p, v) for p in "ab" for v in ("lmqn", "ilmqn-b", "lmqn", "ilmqn-b")])]
    shuffled = [base[i] for i in perm]
    assert emit(aggregate(shuffled), "csv") == emit(aggregate(base), "csv")


def test_empty_aggregate_rejected():
    with pytest.raises(ValueError):
        aggregate([])


def test_markdown_layout():
    text = emit([AggregateRow(1e-3, "lmqn", 40, 42, 41.05, 42.04, 42.04)], "markdown")
    lines = text.splitlines()
    assert lines[0].startswith("| eps | Variant | nsucc | its. | costf | costg | rel. its.")
    assert lines[2] == "| 1e-03 | LMQN | 40/42 | 41.05 | 42.04 | 42.04 |  |  |  |"


def test_csv_round_trip(small_records):
    rows = aggregate(small_records)
    assert parse_csv(emit(rows, "csv")) == rows


@given(st.lists(st.tuples(st.floats(1e-9, 1.0), st.integers(0, 50), st.floats(0, 1e4),
                          st.one_of(st.none(), st.floats(0, 10))), min_size=1, max_size=6))
def test_csv_round_trip_property(items):
    rows = [AggregateRow(e, "ilmqn-a", n, 50, m, m / 2, m / 3, rel, rel, rel) for e, n, m, rel in items]
    assert parse_csv(emit(rows, "csv")) == rows


def test_json_plot_groups(small_records):
    payload = json.loads(emit(aggregate(small_records), "json"))
    assert set(payload) == {"rows", "plots"}
    plots = payload["plots"]
    for label in ("LMQN", "iLMQN-a"):
        groups = list(plots["reliability_and_iterations"][label]) + list(plots["energy_savings"][label])
        assert groups == ["success_ratio", "rel_its", "rel_costf", "rel_costg"]
    assert plots["reliability_and_iterations"]["LMQN"]["rel_its"] == [1.0]


def test_plot_data_success_ratio():
    rows = [AggregateRow(1e-3, "lmqn", 3, 4, 1, 1, 1)]
    assert plot_data(rows)["reliability_and_iterations"]["LMQN"]["success_ratio"] == [0.75]


def test_trace_round_trip(tmp_path):
    spec = CampaignSpec(variants=("ilmqn-a",), epsilons=(1e-3,), replicates=2, problems=("beale",))
    recs = run_campaign(spec, trace=True)
    path = tmp_path / "t.jsonl"
    n = write_traces(recs, path)
    assert n == sum(len(r["trace"]) for r in recs)
    runs = read_traces(path)
    assert len(runs) == 2
    assert [len(r["trace"]) for r in runs] == [len(r["trace"]) for r in recs]
    assert all(math.isfinite(it["delta"]) for r in runs for it in r["trace"])


def test_in_worker_audit():
    spec = CampaignSpec(variants=("lmqn", "ilmqn-b"), epsilons=(1e-3,), replicates=2, problems=("rosenbr",))
    for r in run_campaign(spec, audit=True):
        assert r["audit"]["passed"] and "trace" not in r
