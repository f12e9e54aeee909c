"""Trust-region step computation.

``solve_tr`` runs Steihaug-Toint truncated conjugate gradients from ``s = 0``;
its first iterate is the Cauchy point, and the model value never increases
along the CG path, so the Cauchy decrease is inherited.  Every returned step is
checked against the sufficient-decrease floor

    pred >= 0.5 * ||g|| * min(||g|| / (1 + h), delta)

where ``h`` is a lower bound on ``||H||``.  A CG step that misses it (only
possible through rounding) is replaced by the Cauchy point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lsr1 import LSR1

__all__ = ["TrStep", "cauchy_point", "cauchy_floor", "model_decrease", "safe_norm", "solve_tr"]


def safe_norm(v) -> float:
    """Euclidean norm that stays accurate when the squares underflow."""
    v = np.asarray(v, dtype=float)
    if not v.size:
        return 0.0
    sq = float(v.dot(v))
    if 1e-280 < sq < 1e280:
        return math.sqrt(sq)
    scale = float(np.abs(v).max())
    if scale == 0.0 or not math.isfinite(scale):
        return scale
    w = v / scale
    return scale * math.sqrt(float(w.dot(w)))


@dataclass
class TrStep:
    s: np.ndarray
    pred: float
    boundary_hit: bool
    cg_iters: int
    h_norm_lb: float = 0.0
    cauchy_floor: float = 0.0

    @property
    def satisfies_cauchy(self) -> bool:
        return self.pred >= self.cauchy_floor


def model_decrease(g, H: LSR1, s) -> float:
    """``m(0) - m(s) = -g^T s - s^T H s / 2``."""
    return float(-(g @ s) - 0.5 * (s @ H.apply(s)))


def _h_lower_bound(g, H: LSR1, gnorm: float, curv: float) -> float:
    # the Rayleigh quotient along g is itself a lower bound on ||H||
    return max(H.norm_lower_bound(), abs(curv) / gnorm**2)


def cauchy_floor(gnorm: float, h_norm: float, delta: float) -> float:
    return 0.5 * gnorm * min(gnorm / (1.0 + h_norm), delta)


def _to_boundary(s, p, delta) -> float:
    """Positive ``tau`` with ``||s + tau p|| = delta``."""
    # work with s / delta and a unit direction so tiny radii do not underflow
    pnorm = safe_norm(p)
    d = p / pnorm
    st = s / delta
    b = float(st @ d)
    c = max(1.0 - float(st @ st), 0.0)
    root = math.sqrt(b * b + c)
    sigma = c / (b + root) if b > 0 else root - b
    return delta * sigma / pnorm


def cauchy_point(g, H: LSR1, delta: float) -> TrStep:
    """Minimizer of the quadratic model along ``-g`` inside the ball."""
    g = np.asarray(g, dtype=float)
    gnorm = safe_norm(g)
    if gnorm == 0.0:
        raise ValueError("cauchy_point needs a nonzero gradient")
    if delta <= 0:
        raise ValueError("delta must be positive")
    curv = float(g @ H.apply(g))
    tmax = delta / gnorm
    if curv <= 0:
        t, boundary = tmax, True
    else:
        tstar = gnorm**2 / curv
        t, boundary = (tmax, True) if tstar >= tmax else (tstar, False)
    s = -t * g
    pred = t * gnorm**2 - 0.5 * t * t * curv
    h = _h_lower_bound(g, H, gnorm, curv)
    return TrStep(s, float(pred), boundary, 1, h, cauchy_floor(gnorm, h, delta))


def solve_tr(g, H: LSR1, delta: float, max_iters: int | None = None) -> TrStep:
    """Steihaug-Toint truncated CG for ``min g^T s + s^T H s / 2, ||s|| <= delta``.

    Stops on a small residual (``min(0.1, sqrt(||g||)) * ||g||``), on reaching
    the boundary, or on negative curvature.  ``max_iters`` defaults to the
    dimension.
    """
    g = np.asarray(g, dtype=float)
    gnorm = safe_norm(g)
    if gnorm == 0.0:
        raise ValueError("solve_tr needs a nonzero gradient")
    if delta <= 0:
        raise ValueError("delta must be positive")
    if max_iters is None:
        max_iters = g.size
    tol = min(0.1, math.sqrt(gnorm)) * gnorm

    s = np.zeros_like(g)
    r = g.copy()
    p = -g
    rr = gnorm**2
    boundary = False
    curv_g = None
    it = 0
    with np.errstate(all="ignore"):
        while it < max_iters:
            it += 1
            hp = H.apply(p)
            kappa = float(p @ hp)
            if curv_g is None:
                curv_g = kappa
            if kappa <= 0:
                s = s + _to_boundary(s, p, delta) * p
                boundary = True
                break
            alpha = rr / kappa
            s_next = s + alpha * p
            if safe_norm(s_next) >= delta:
                s = s + _to_boundary(s, p, delta) * p
                boundary = True
                break
            s = s_next
            r = r + alpha * hp
            rr_next = float(r @ r)
            if math.sqrt(rr_next) <= tol:
                break
            p = -r + (rr_next / rr) * p
            rr = rr_next
        pred = model_decrease(g, H, s)

    h = _h_lower_bound(g, H, gnorm, curv_g)
    floor = cauchy_floor(gnorm, h, delta)
    if not (np.all(np.isfinite(s)) and math.isfinite(pred)) or pred < floor:
        return cauchy_point(g, H, delta)
    return TrStep(s, pred, boundary, it, h, floor)
