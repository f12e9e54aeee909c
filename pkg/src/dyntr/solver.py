"""Trust-region method with dynamic accuracy on the objective and gradient.

Five accuracy policies are provided:

* ``lmqn``    -- exact (double precision) evaluations throughout;
* ``lmqn-s``  -- every evaluation forced to single precision;
* ``lmqn-h``  -- every evaluation forced to half precision;
* ``ilmqn-a`` -- ``omega_f+ = min(0.1, 0.04 eta1 pred)``, ``omega_g = kappa_g / 2``;
* ``ilmqn-b`` -- same ``omega_f+``, ``omega_g = min(kappa_g, omega_f)``.

The iteration is: evaluate the gradient when the iterate moved, stop when its
norm is below ``eps / (1 + kappa_g)``, take a truncated-CG step on the LSR1
model, evaluate ``f`` at the trial point to an accuracy tied to the predicted
decrease (re-evaluating ``f`` at the current point if that accuracy is finer
than what is stored), then accept or reject and update the radius.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .lsr1 import LSR1
from .oracle import (
    EnergyLedger,
    EvaluationError,
    NoiseStream,
    PrecisionLevel,
    f_bar,
    f_bar_forced,
    g_bar,
    g_bar_forced,
)
from .problems import Problem
from .subproblem import model_decrease, safe_norm, solve_tr

__all__ = [
    "IterationRecord",
    "SolveResult",
    "SolverConfig",
    "Status",
    "Variant",
    "check_termination",
    "policy_omega_f",
    "policy_omega_g",
    "solve",
    "update_radius",
]


class Variant(str, enum.Enum):
    LMQN = "lmqn"
    LMQN_S = "lmqn-s"
    LMQN_H = "lmqn-h"
    ILMQN_A = "ilmqn-a"
    ILMQN_B = "ilmqn-b"

    @property
    def forced_level(self) -> PrecisionLevel | None:
        return {
            Variant.LMQN_S: PrecisionLevel.SINGLE,
            Variant.LMQN_H: PrecisionLevel.HALF,
        }.get(self)

    @property
    def is_dynamic(self) -> bool:
        return self in (Variant.ILMQN_A, Variant.ILMQN_B)

    @property
    def label(self) -> str:
        return {
            "lmqn": "LMQN",
            "lmqn-s": "LMQN-s",
            "lmqn-h": "LMQN-h",
            "ilmqn-a": "iLMQN-a",
            "ilmqn-b": "iLMQN-b",
        }[self.value]


class Status(str, enum.Enum):
    CONVERGED = "converged"
    ITER_LIMIT = "iter_limit"
    EVAL_ERROR = "eval_error"


@dataclass(frozen=True)
class SolverConfig:
    variant: Variant = Variant.LMQN
    epsilon: float = 1e-5
    eta0: float = 0.01
    eta1: float = 0.05
    eta2: float = 0.75
    gamma1: float = 0.25
    gamma2: float = 0.5
    gamma3: float = 2.5
    kappa_g: float = 0.1
    delta0: float = 1.0
    max_iters: int = 1000
    # None: 0.01 for the dynamic variants, 0 otherwise
    omega_f0: float | None = None
    shrink_factor: float = 0.5
    midrange_factor: float = 0.75
    grow_factor: float = 2.0
    memory: int = 15
    lsr1_rescale: str = "every"

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.omega_f0 is None:
            object.__setattr__(self, "omega_f0", 0.01 if self.variant.is_dynamic else 0.0)
        checks = [
            (0 < self.eta1 <= self.eta2 < 1, "0 < eta1 <= eta2 < 1"),
            (0 < self.gamma1 <= self.gamma2 < 1 <= self.gamma3, "0 < gamma1 <= gamma2 < 1 <= gamma3"),
            (0 < self.eta0 < 0.5 * self.eta1, "0 < eta0 < eta1 / 2"),
            (self.kappa_g > 0, "kappa_g > 0"),
            (self.eta0 + self.kappa_g < 0.5 * (1 - self.eta2), "eta0 + kappa_g < (1 - eta2) / 2"),
            (1 <= self.grow_factor < self.gamma3, "grow_factor in [1, gamma3)"),
            (self.gamma2 <= self.midrange_factor < 1, "midrange_factor in [gamma2, 1)"),
            (self.gamma1 <= self.shrink_factor <= self.gamma2, "shrink_factor in [gamma1, gamma2]"),
            (0 < self.epsilon <= 1, "epsilon in (0, 1]"),
            (self.delta0 > 0, "delta0 > 0"),
            (self.max_iters >= 1, "max_iters >= 1"),
            (self.omega_f0 >= 0, "omega_f0 >= 0"),
        ]
        for ok, msg in checks:
            if not ok:
                raise ValueError(f"invalid solver constants: {msg}")


def policy_omega_g(variant: Variant, config: SolverConfig, omega_f_current: float) -> float:
    """Relative gradient accuracy requested at a new iterate."""
    variant = Variant(variant)
    if variant is Variant.ILMQN_A:
        return 0.5 * config.kappa_g
    if variant is Variant.ILMQN_B:
        return min(config.kappa_g, omega_f_current)
    return 0.0


def policy_omega_f(variant: Variant, config: SolverConfig, pred: float) -> float:
    """Absolute objective accuracy requested at the trial point."""
    if Variant(variant).is_dynamic:
        return min(0.1, 0.04 * config.eta1 * pred)
    return 0.0


def update_radius(config: SolverConfig, rho: float, delta: float) -> float:
    if rho >= config.eta2:
        return config.grow_factor * delta
    if rho >= config.eta1:
        return config.midrange_factor * delta
    return config.shrink_factor * delta


def check_termination(gbar_norm: float, config: SolverConfig) -> bool:
    return gbar_norm <= config.epsilon / (1.0 + config.kappa_g)


@dataclass
class IterationRecord:
    k: int
    x: list
    delta: float
    omega_f: float
    omega_g: float
    gbar_norm: float
    pred: float
    rho: float
    accepted: bool
    tiers_used: list
    exact_f: float
    exact_f_trial: float
    omega_f_plus: float
    h_norm_lb: float
    cauchy_floor: float
    cg_iters: int


@dataclass
class SolveResult:
    problem: str
    variant: str
    epsilon: float
    seed: int
    status: Status
    iterations: int
    n_successful: int
    ledger: EnergyLedger
    x_final: np.ndarray
    exact_grad_norm_final: float
    trace: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)

    @property
    def converged(self) -> bool:
        return self.status is Status.CONVERGED

    @property
    def success(self) -> bool:
        """Converged and the true gradient norm really is below epsilon."""
        return self.converged and self.exact_grad_norm_final <= self.epsilon

    def to_record(self) -> dict:
        rec = {
            "problem": self.problem,
            "variant": self.variant,
            "epsilon": self.epsilon,
            "seed": self.seed,
            "status": self.status.value,
            "success": self.success,
            "iterations": self.iterations,
            "n_successful": self.n_successful,
            "exact_grad_norm_final": self.exact_grad_norm_final,
            "x_final": [float(v) for v in self.x_final],
        }
        rec.update(self.ledger.to_dict())
        if self.checks:
            rec["checks"] = dict(self.checks)
        return rec


def _new_checks() -> dict:
    return {
        "f_calls": 0,
        "f_violations": 0,
        "g_calls": 0,
        "g_violations": 0,
        "cauchy_checks": 0,
        "cauchy_violations": 0,
        "omega_violations": 0,
    }


class _Run:
    """Mutable state of a single solve."""

    def __init__(self, problem: Problem, config: SolverConfig, seed: int, trace: bool, check: bool):
        self.problem = problem
        self.config = config
        self.variant = config.variant
        self.ledger = EnergyLedger()
        self.noise = NoiseStream(seed)
        self.want_trace = trace
        self.check = check
        self.checks = _new_checks() if check else {}
        self.tiers: list = []
        self._shadow: list = []

    # exact shadow values cost nothing and are only used for bookkeeping;
    # the last few are cached by array identity (iterates are never mutated)
    def exact_f(self, x) -> float:
        for obj, val in self._shadow:
            if obj is x:
                return val
        with np.errstate(all="ignore"):
            val = float(self.problem.f(x))
        self._shadow = [(x, val)] + self._shadow[:2]
        return val

    def eval_f(self, x, omega: float) -> float:
        forced = self.variant.forced_level
        if forced is not None:
            val = f_bar_forced(self.problem, x, forced, self.ledger, self.noise)
            level = forced
        else:
            val, level = f_bar(self.problem, x, omega, self.ledger, self.noise)
            if self.check:
                self.checks["f_calls"] += 1
                if not abs(val - self.exact_f(x)) <= omega:
                    self.checks["f_violations"] += 1
        self.tiers.append("f:" + level.label)
        return val

    def eval_g(self, x, omega: float) -> np.ndarray:
        forced = self.variant.forced_level
        if forced is not None:
            grad = g_bar_forced(self.problem, x, forced, self.ledger, self.noise)
            level = forced
        else:
            grad, level = g_bar(self.problem, x, omega, self.ledger, self.noise)
            if self.check:
                self.checks["g_calls"] += 1
                err = np.linalg.norm(grad - self.problem.g(x))
                if not err <= omega * np.linalg.norm(grad):
                    self.checks["g_violations"] += 1
        self.tiers.append("g:" + level.label)
        return grad


def solve(problem: Problem, config: SolverConfig, seed: int = 0, *,
          trace: bool = False, check: bool = False) -> SolveResult:
    """Minimize ``problem`` from its standard start point.

    ``trace`` keeps one :class:`IterationRecord` per iteration; ``check``
    counts oracle-bound, Cauchy-decrease and accuracy-policy violations
    against zero-cost exact evaluations (``SolveResult.checks``).
    """
    cfg = config
    run = _Run(problem, cfg, seed, trace, check)
    variant = cfg.variant
    dynamic = variant.is_dynamic
    records: list[IterationRecord] = []

    x = np.array(problem.x0, dtype=float)
    delta = cfg.delta0
    hess = LSR1(problem.dim, memory=cfg.memory, rescale=cfg.lsr1_rescale)
    omega_f = cfg.omega_f0
    omega_g = 0.0
    n_succ = 0
    status = Status.ITER_LIMIT
    k = 0

    def finish(status_):
        with np.errstate(all="ignore"):
            gtrue = float(np.linalg.norm(problem.g(x)))
        return SolveResult(
            problem=problem.name,
            variant=variant.value,
            epsilon=cfg.epsilon,
            seed=seed,
            status=status_,
            iterations=k,
            n_successful=n_succ,
            ledger=run.ledger,
            x_final=x,
            exact_grad_norm_final=gtrue if math.isfinite(gtrue) else math.inf,
            trace=records,
            checks=run.checks,
        )

    try:
        f_k = run.eval_f(x, omega_f)
    except EvaluationError:
        return finish(Status.EVAL_ERROR)

    gbar = None
    pending = None  # (s, previous gradient) awaiting the new gradient for LSR1
    while True:
        run.tiers = []
        # Step 1: gradient at a new iterate, then the termination test
        if gbar is None:
            omega_g = policy_omega_g(variant, cfg, omega_f)
            try:
                gbar = run.eval_g(x, omega_g)
            except EvaluationError:
                return finish(Status.EVAL_ERROR)
            if dynamic and check and omega_g > cfg.kappa_g:
                run.checks["omega_violations"] += 1
            if pending is not None:
                s_prev, g_prev = pending
                hess.update(s_prev, gbar - g_prev)
                pending = None
            gnorm = safe_norm(gbar)
        if check_termination(gnorm, cfg):
            status = Status.CONVERGED
            break
        if k >= cfg.max_iters:
            break

        # Step 2: step on the quadratic model
        step = solve_tr(gbar, hess, delta)
        s, pred = step.s, step.pred
        if check:
            run.checks["cauchy_checks"] += 1
            if not (pred >= step.cauchy_floor and safe_norm(s) <= delta * (1 + 1e-12)):
                run.checks["cauchy_violations"] += 1

        # Step 3: objective at the trial point, refreshing f_k if needed
        omega_plus = policy_omega_f(variant, cfg, pred) if pred > 0 else 0.0
        if dynamic and check and not omega_plus <= cfg.eta0 * pred:
            run.checks["omega_violations"] += 1
        x_trial = x + s
        try:
            f_plus = run.eval_f(x_trial, omega_plus)
        except EvaluationError:
            f_plus = math.inf
        if dynamic and omega_plus < omega_f:
            f_k = run.eval_f(x, omega_plus)
            omega_f = omega_plus

        # Step 4: acceptance
        if pred > 0 and math.isfinite(f_plus):
            rho = (f_k - f_plus) / pred
        else:
            rho = -math.inf
        accepted = rho >= cfg.eta1

        if trace:
            records.append(
                IterationRecord(
                    k=k,
                    x=[float(v) for v in x],
                    delta=delta,
                    omega_f=omega_f,
                    omega_g=omega_g,
                    gbar_norm=gnorm,
                    pred=pred,
                    rho=rho,
                    accepted=accepted,
                    tiers_used=list(run.tiers),
                    exact_f=run.exact_f(x),
                    exact_f_trial=run.exact_f(x_trial),
                    omega_f_plus=omega_plus,
                    h_norm_lb=step.h_norm_lb,
                    cauchy_floor=step.cauchy_floor,
                    cg_iters=step.cg_iters,
                )
            )

        if accepted:
            pending = (s, gbar)
            x = x_trial
            f_k = f_plus
            omega_f = omega_plus
            gbar = None
            n_succ += 1

        # Step 5: radius
        delta = update_radius(cfg, rho, delta)
        k += 1

    return finish(status)


def record_to_dict(rec: IterationRecord) -> dict:
    return asdict(rec)
