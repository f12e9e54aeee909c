"""Limited-memory symmetric rank-one Hessian approximation.

The matrix is never formed.  Stored secant pairs are unrolled into the sum

    H = h0 * I + sum_i u_i u_i^T / d_i,   u_i = y_i - H_{i-1} s_i,  d_i = u_i^T s_i

so a product costs O(n * memory).
"""

from __future__ import annotations

import math
from collections import deque

import numpy as np

__all__ = ["LSR1", "RESCALE_POLICIES"]

RESCALE_POLICIES = ("every", "first", "none")


class LSR1:
    """Bounded FIFO of secant pairs defining a symmetric operator ``H``.

    Parameters
    ----------
    dim : int
        Problem dimension.
    memory : int
        Maximum number of retained pairs.
    skip_tol : float
        A pair is rejected when ``|s^T (y - H s)| < skip_tol ||s|| ||y - H s||``.
    init_scale : float
        Initial multiple of the identity.
    rescale : {"every", "first", "none"}
        When to reset the identity scaling to ``y^T y / y^T s``: from every
        pair offered with positive curvature (``y^T s > skip_tol ||s|| ||y||``),
        from the first such pair only, or never.
    """

    def __init__(self, dim: int, memory: int = 15, skip_tol: float = 1e-8,
                 init_scale: float = 1.0, rescale: str = "every"):
        if memory < 1:
            raise ValueError("memory must be positive")
        if rescale not in RESCALE_POLICIES:
            raise ValueError(f"rescale must be one of {RESCALE_POLICIES}")
        self.dim = int(dim)
        self.memory = int(memory)
        self.skip_tol = float(skip_tol)
        self.init_scale = float(init_scale)
        self.rescale = rescale
        self._scaled = False
        self.pairs: deque = deque()
        self.n_skipped = 0
        self._u = np.zeros((self.dim, 0))
        self._dinv = np.zeros(0)
        self._norm_lb: float | None = None
        self._v0: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.pairs)

    def _check(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if v.shape != (self.dim,):
            raise ValueError(f"expected a vector of length {self.dim}, got shape {v.shape}")
        return v

    def apply(self, v) -> np.ndarray:
        """Return ``H @ v``."""
        v = self._check(v)
        out = self.init_scale * v
        if self._dinv.size:
            # ndarray.dot skips the floating-point error checks of ``@``
            out += self._u.dot(self._dinv * self._u.T.dot(v))
        return out

    def _passes(self, s, u) -> bool:
        uu = float(u.dot(u))
        if uu == 0.0:
            return False
        ss = float(s.dot(s))
        if 0.0 < uu < math.inf and ss < math.inf:
            return abs(float(s.dot(u))) >= self.skip_tol * math.sqrt(ss * uu)
        # the squares overflowed: compare with scaled vectors
        us = u / float(np.abs(u).max())
        sc = s / float(np.abs(s).max())
        return abs(float(sc.dot(us))) >= self.skip_tol * math.sqrt(float(sc.dot(sc)) * float(us.dot(us)))

    def _rebuild(self) -> None:
        m = len(self.pairs)
        S = np.column_stack([p[0] for p in self.pairs]) if m else np.zeros((self.dim, 0))
        R = np.column_stack([p[1] for p in self.pairs]) - self.init_scale * S if m else S
        U = np.empty((self.dim, m))
        dinv = np.empty(m)
        keep = []
        j = 0
        for i in range(m):
            s = S[:, i]
            u = R[:, i]
            if j:
                Uj = U[:, :j]
                u = u - Uj.dot(dinv[:j] * Uj.T.dot(s))
            if not self._passes(s, u):
                continue
            keep.append(i)
            U[:, j] = u
            dinv[j] = 1.0 / float(u.dot(s))
            j += 1
        if j < m:
            self.pairs = deque(self.pairs[i] for i in keep)
        self._u = U[:, :j]
        self._dinv = dinv[:j]
        self._norm_lb = None

    def update(self, s, y) -> bool:
        """Offer the pair ``(s, y)``; return True if it was stored."""
        s = self._check(s).copy()
        y = self._check(y).copy()
        if not np.any(s):
            raise ValueError("s must be nonzero")
        ys, yy = float(y.dot(s)), float(y.dot(y))
        # rescale only on clearly positive curvature; a tiny y^T s would blow h0 up
        curvature = ys > self.skip_tol * math.sqrt(float(s.dot(s)) * yy)
        if curvature and (self.rescale == "every" or (self.rescale == "first" and not self._scaled)):
            self.init_scale = yy / ys
            self._scaled = True
            self._rebuild()
        if not self._passes(s, y - self.apply(s)):
            self.n_skipped += 1
            return False
        if len(self.pairs) == self.memory:
            self.pairs.popleft()
            self.pairs.append((s, y))
            self._rebuild()
            # the pair can still fail against the shortened history
            if not self.pairs or self.pairs[-1][0] is not s:
                self.n_skipped += 1
                return False
        else:
            # appending leaves the earlier columns unchanged
            self._append(s, y)
        return True

    def _append(self, s, y) -> None:
        u = y - self.apply(s)
        self.pairs.append((s, y))
        self._u = np.column_stack([self._u, u])
        self._dinv = np.append(self._dinv, 1.0 / float(u.dot(s)))
        self._norm_lb = None

    def norm_lower_bound(self, steps: int = 10) -> float:
        """Lower bound on ``||H||_2`` from power iteration.

        Every iterate ``v`` gives ``||H v|| / ||v|| <= ||H||``; the largest is
        returned.  Cached until the next accepted update.
        """
        if self._norm_lb is not None:
            return self._norm_lb
        if not self._dinv.size:
            self._norm_lb = abs(self.init_scale)
            return self._norm_lb
        if self._v0 is None:
            v = np.random.default_rng(20190419).standard_normal(self.dim)
            self._v0 = v / math.sqrt(float(v.dot(v)))
        v = self._v0
        best = 0.0
        for _ in range(steps):
            w = self.apply(v)
            nw = math.sqrt(float(w.dot(w)))
            best = max(best, nw)
            if nw == 0.0 or not np.isfinite(nw):
                break
            v = w / nw
        self._norm_lb = best
        return best

    def to_dense(self) -> np.ndarray:
        return np.column_stack([self.apply(e) for e in np.eye(self.dim)])
