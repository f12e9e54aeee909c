"""Run-time audits of solver traces against the worst-case theory.

Hard checks (a failure fails the audit):

* exact-f monotonicity on accepted steps, for the exact and dynamic variants;
* the split between successful and unsuccessful iterations: for every trace
  prefix of ``k`` iterations with ``S`` successes,
  ``k <= S (1 - log g3 / log g2) + log(delta0 / delta_k) / |log g2|``,
  together with the partition identity ``k = |S| + |U|``.

Informational checks use measured constants (largest ``||H_k||`` lower bound,
finite-difference Hessian norms, smallest exact ``f``) and are only reported:
the radius floor ``min(delta0, theta * eps)`` and the iteration budgets.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping

import numpy as np

from .problems import Problem
from .solver import SolverConfig, Variant

MONOTONE_VARIANTS = frozenset({Variant.LMQN, Variant.ILMQN_A, Variant.ILMQN_B})


def _get(rec, name):
    return rec[name] if isinstance(rec, Mapping) else getattr(rec, name)


def theta(config: SolverConfig, kappa_hnabla: float) -> float:
    margin = 0.5 * (1 - config.eta1) - config.eta0 - config.kappa_g
    return config.gamma1 * margin / (kappa_hnabla * (1 + config.kappa_g))


def budgets(config: SolverConfig, kappa_hnabla: float, f0: float, f_low: float) -> tuple[float, float]:
    """Return ``(tau_S, tau_tot)`` for the given measured constants."""
    th = theta(config, kappa_hnabla)
    eps = config.epsilon
    tau_s = 2 * (f0 - f_low) * (1 + config.kappa_g) / ((config.eta1 - 2 * config.eta0) * th * eps**2)
    ratio = 1 - math.log(config.gamma3) / math.log(config.gamma2)
    tau_tot = tau_s * ratio + math.log(config.delta0 / (th * eps)) / abs(math.log(config.gamma2))
    return tau_s, tau_tot


def split_bound(n_succ: int, delta: float, config: SolverConfig) -> float:
    """Right-hand side of the successful/unsuccessful split inequality."""
    lg2 = math.log(config.gamma2)
    return n_succ * (1 - math.log(config.gamma3) / lg2) + math.log(config.delta0 / delta) / abs(lg2)


def check_split(trace, config: SolverConfig) -> dict:
    """Check the split inequality on every prefix of ``trace``."""
    n_succ = n_fail = 0
    violations = 0
    worst = -math.inf
    for j, rec in enumerate(trace):
        # the radius at iteration j results from iterations 0..j-1
        delta = _get(rec, "delta")
        if delta > 0:
            bound = split_bound(n_succ, delta, config)
            worst = max(worst, j - bound)
            if j > bound + 1e-9 * max(1.0, abs(bound)):
                violations += 1
        if _get(rec, "accepted"):
            n_succ += 1
        else:
            n_fail += 1
    k = len(trace)
    return {
        "k": k,
        "n_successful": n_succ,
        "n_unsuccessful": n_fail,
        "partition_ok": k == n_succ + n_fail,
        "split_violations": violations,
        "split_worst_slack": worst,
    }


def check_monotone(trace) -> int:
    """Number of accepted steps on which the exact objective went up."""
    bad = 0
    for rec in trace:
        if _get(rec, "accepted") and not _get(rec, "exact_f_trial") <= _get(rec, "exact_f"):
            bad += 1
    return bad


def check_acceptance_flags(trace, config: SolverConfig) -> int:
    """Records whose ``accepted`` flag disagrees with ``rho >= eta1``."""
    return sum(bool(_get(r, "accepted")) != (_get(r, "rho") >= config.eta1) for r in trace)


def fd_hessian_norm(problem: Problem, x, h: float = 1e-5) -> float:
    """Spectral norm of a central-difference Hessian built from the gradient."""
    x = np.asarray(x, dtype=float)
    n = x.size
    H = np.empty((n, n))
    for i in range(n):
        step = h * max(1.0, abs(x[i]))
        e = np.zeros(n)
        e[i] = step
        H[:, i] = (problem.g(x + e) - problem.g(x - e)) / (2 * step)
    H = 0.5 * (H + H.T)
    return float(np.linalg.norm(H, 2))


def estimate_kappa_nabla(problem: Problem, points, max_points: int = 20) -> float:
    pts = list(points)
    if len(pts) > max_points:
        idx = np.linspace(0, len(pts) - 1, max_points).round().astype(int)
        pts = [pts[i] for i in idx]
    with np.errstate(all="ignore"):
        vals = [fd_hessian_norm(problem, p) for p in pts]
    vals = [v for v in vals if math.isfinite(v)]
    return max(vals) if vals else math.nan


def audit_run(trace, config: SolverConfig, problem: Problem | None = None,
              max_dim: int = 10) -> dict:
    """Audit one run's trace.

    ``problem`` enables the informational bounds, which need the Hessian
    estimate; they are skipped above ``max_dim`` variables.
    """
    variant = Variant(config.variant)
    report = check_split(trace, config)
    report["flag_mismatches"] = check_acceptance_flags(trace, config)
    report["monotone_violations"] = check_monotone(trace) if variant in MONOTONE_VARIANTS else 0
    report["passed"] = (
        report["partition_ok"]
        and report["split_violations"] == 0
        and report["monotone_violations"] == 0
        and report["flag_mismatches"] == 0
    )
    if problem is not None and trace and problem.dim <= max_dim:
        report["info"] = _informational(trace, config, problem)
    return report


def _informational(trace, config: SolverConfig, problem: Problem) -> dict:
    kappa_h = max(_get(r, "h_norm_lb") for r in trace)
    # distinct iterates only; x changes exactly after accepted steps
    visited = [_get(trace[0], "x")]
    for r in trace[1:]:
        if _get(r, "x") != visited[-1]:
            visited.append(_get(r, "x"))
    kappa_nabla = estimate_kappa_nabla(problem, visited)
    k_hn = 1 + max(kappa_h, kappa_nabla)
    th = theta(config, k_hn) if math.isfinite(k_hn) else 0.0
    if not th > 0:
        # constants too large to give a usable bound
        return {"kappa_h": kappa_h, "kappa_nabla": kappa_nabla}
    floor = min(config.delta0, th * config.epsilon)
    min_delta = min(_get(r, "delta") for r in trace)
    f0 = _get(trace[0], "exact_f")
    f_low = min(min(_get(r, "exact_f") for r in trace),
                min(_get(r, "exact_f_trial") for r in trace if math.isfinite(_get(r, "exact_f_trial"))))
    tau_s, tau_tot = budgets(config, k_hn, f0, f_low)
    n_succ = sum(bool(_get(r, "accepted")) for r in trace)
    return {
        "kappa_h": kappa_h,
        "kappa_nabla": kappa_nabla,
        "theta": th,
        "radius_floor": floor,
        "min_delta": min_delta,
        "radius_floor_ok": min_delta >= floor,
        "tau_s": tau_s,
        "tau_tot": tau_tot,
        "budget_ok": n_succ <= tau_s and len(trace) <= tau_tot,
    }


def audit_theory(runs: Iterable[Mapping], config_for=None, problem_for=None) -> dict:
    """Audit a collection of runs.

    Each run is a mapping with ``problem``, ``variant``, ``epsilon`` and
    ``trace`` keys.  ``config_for(run)`` and ``problem_for(run)`` override the
    default config and problem lookup.  Raises ValueError when traces are
    missing.
    """
    from .problems import get_problem

    reports = []
    for run in runs:
        if "trace" not in run or run["trace"] is None:
            raise ValueError(f"run {run.get('problem')}/{run.get('variant')} has no trace")
        cfg = config_for(run) if config_for else SolverConfig(variant=run["variant"], epsilon=run["epsilon"])
        prob = problem_for(run) if problem_for else get_problem(run["problem"])
        rep = audit_run(run["trace"], cfg, prob)
        rep.update(problem=run["problem"], variant=run["variant"], epsilon=run["epsilon"], seed=run.get("seed"))
        reports.append(rep)
    return {
        "runs": reports,
        "n_runs": len(reports),
        "n_failed": sum(not r["passed"] for r in reports),
        "passed": all(r["passed"] for r in reports),
    }
