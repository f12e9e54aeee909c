"""Simulated multi-precision evaluation of objective and gradient.

Reduced precision is emulated by adding uniform noise of a fixed half-width
to the double-precision value.  Each evaluation is charged its equivalent
double-precision cost (1, 1/4, 1/16) to an :class:`EnergyLedger`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .problems import Problem

__all__ = [
    "EnergyLedger",
    "EvaluationError",
    "NoiseStream",
    "PrecisionLevel",
    "f_bar",
    "f_bar_forced",
    "g_bar",
    "g_bar_forced",
]


class EvaluationError(ArithmeticError):
    """The exact function or gradient value is not finite."""


class PrecisionLevel(enum.Enum):
    """Arithmetic tier: (noise half-width, equivalent double-precision cost)."""

    HALF = (1e-4, Fraction(1, 16))
    SINGLE = (1e-8, Fraction(1, 4))
    DOUBLE = (0.0, Fraction(1))

    @property
    def halfwidth(self) -> float:
        return self.value[0]

    @property
    def cost(self) -> Fraction:
        return self.value[1]

    @property
    def label(self) -> str:
        return self.name.lower()


# cheapest first
TIERS = (PrecisionLevel.HALF, PrecisionLevel.SINGLE, PrecisionLevel.DOUBLE)


def _zero_counts():
    return {level: 0 for level in TIERS}


@dataclass
class EnergyLedger:
    """Per-tier evaluation counts; costs are derived so they stay additive."""

    f_counts: dict = field(default_factory=_zero_counts)
    g_counts: dict = field(default_factory=_zero_counts)

    def charge_f(self, level: PrecisionLevel) -> None:
        self.f_counts[level] += 1

    def charge_g(self, level: PrecisionLevel) -> None:
        self.g_counts[level] += 1

    @property
    def cost_f(self) -> Fraction:
        return sum((lv.cost * c for lv, c in self.f_counts.items()), Fraction(0))

    @property
    def cost_g(self) -> Fraction:
        return sum((lv.cost * c for lv, c in self.g_counts.items()), Fraction(0))

    def to_dict(self) -> dict:
        return {
            "costf": float(self.cost_f),
            "costg": float(self.cost_g),
            "f_counts": {lv.label: c for lv, c in self.f_counts.items()},
            "g_counts": {lv.label: c for lv, c in self.g_counts.items()},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EnergyLedger":
        ledger = cls()
        for lv in TIERS:
            ledger.f_counts[lv] = int(d["f_counts"][lv.label])
            ledger.g_counts[lv] = int(d["g_counts"][lv.label])
        return ledger


class NoiseStream:
    """Seeded source of uniform perturbations (PCG64, bit-reproducible)."""

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._rng = np.random.Generator(np.random.PCG64(self.seed))

    def uniform(self, halfwidth: float, size=None):
        return self._rng.uniform(-halfwidth, halfwidth, size)


def _exact_f(problem: Problem, x) -> float:
    with np.errstate(all="ignore"):
        val = float(problem.f(x))
    if not math.isfinite(val):
        raise EvaluationError(f"{problem.name}: f is not finite")
    return val


def _exact_g(problem: Problem, x) -> np.ndarray:
    with np.errstate(all="ignore"):
        grad = np.asarray(problem.g(x), dtype=float)
    if not np.all(np.isfinite(grad)):
        raise EvaluationError(f"{problem.name}: gradient is not finite")
    return grad


def _perturb(exact: np.ndarray, u: float, noise: NoiseStream) -> np.ndarray:
    """Add uniform noise of half-width ``u``, keeping every entry within ``u``.

    When ``|exact|`` is large, rounding ``exact + noise`` can land an ulp past
    the half-width; such entries are stepped back toward the exact value.
    """
    out = exact + noise.uniform(u, exact.shape)
    bad = np.abs(out - exact) > u
    while bad.any():
        out[bad] = np.nextafter(out[bad], exact[bad])
        bad = np.abs(out - exact) > u
    return out


def select_f_level(omega_f: float) -> PrecisionLevel:
    """Cheapest tier whose noise half-width does not exceed ``omega_f``."""
    if omega_f < 0:
        raise ValueError("omega_f must be nonnegative")
    for level in TIERS:
        if level.halfwidth <= omega_f:
            return level
    return PrecisionLevel.DOUBLE


def f_bar_forced(problem, x, level: PrecisionLevel, ledger: EnergyLedger, noise: NoiseStream) -> float:
    """Objective value computed at exactly ``level``."""
    val = _exact_f(problem, x)
    ledger.charge_f(level)
    u = level.halfwidth
    if u:
        out = val + float(noise.uniform(u))
        while abs(out - val) > u:
            out = math.nextafter(out, val)
        val = out
    return val


def f_bar(problem, x, omega_f: float, ledger: EnergyLedger, noise: NoiseStream):
    """Objective value with absolute error at most ``omega_f``.

    Returns ``(value, level)``.
    """
    level = select_f_level(omega_f)
    return f_bar_forced(problem, x, level, ledger, noise), level


def g_bar_forced(problem, x, level: PrecisionLevel, ledger: EnergyLedger, noise: NoiseStream) -> np.ndarray:
    grad = _exact_g(problem, x)
    ledger.charge_g(level)
    if level.halfwidth:
        grad = _perturb(grad, level.halfwidth, noise)
    return grad


def g_bar(problem, x, omega_g: float, ledger: EnergyLedger, noise: NoiseStream):
    """Gradient whose error is at most ``omega_g`` times its own norm.

    Tiers are tried from the cheapest up.  Per-coordinate noise of half-width
    ``u`` bounds the error norm by ``u * sqrt(n)``, which is compared with
    ``omega_g * ||result||`` after the fact.  Every attempted tier is charged.
    Returns ``(grad, level)``.
    """
    if omega_g < 0:
        raise ValueError("omega_g must be nonnegative")
    exact = _exact_g(problem, x)
    if omega_g == 0:
        ledger.charge_g(PrecisionLevel.DOUBLE)
        return exact.copy(), PrecisionLevel.DOUBLE
    root_n = math.sqrt(exact.size)
    for level in TIERS:
        ledger.charge_g(level)
        u = level.halfwidth
        if u == 0:
            return exact.copy(), level
        grad = _perturb(exact, u, noise)
        if u * root_n <= omega_g * float(np.linalg.norm(grad)):
            return grad, level
    raise AssertionError("unreachable: double tier always accepts")
