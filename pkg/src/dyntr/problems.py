"""Smooth unconstrained test problems with analytic gradients.

Most problems come from the Moré, Garbow and Hillstrom collection and from
Buckley's set; a few are CUTEst-style variable-dimension functions.  Sum of
squares problems are written as ``f(x) = r(x) @ r(x)`` with ``grad = 2 J^T r``.

Every problem is registered under its short (CUTEst-like) name.  Variable
dimension problems take ``n`` as a constructor argument; the registered
default is the dimension used in the benchmark campaign.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = [
    "Problem",
    "catalog",
    "evaluate_exact_f",
    "evaluate_exact_g",
    "get_problem",
    "problem_names",
    "fd_error",
    "fd_gradient",
]


@dataclass(frozen=True)
class Problem:
    name: str
    dim: int
    x0: np.ndarray
    f: Callable[[np.ndarray], float] = field(repr=False)
    g: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    f_lower_hint: float | None = None
    # finite-difference check settings: per-coordinate tolerance, relative step
    fd_rtol: float = 1e-5
    fd_step: float = 1e-6

    def __post_init__(self):
        x0 = np.asarray(self.x0, dtype=float)
        x0.setflags(write=False)
        object.__setattr__(self, "x0", x0)
        if x0.shape != (self.dim,):
            raise ValueError(f"{self.name}: x0 has shape {x0.shape}, expected ({self.dim},)")


def _check_dim(problem: Problem, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (problem.dim,):
        raise ValueError(
            f"{problem.name} expects a vector of length {problem.dim}, got shape {x.shape}"
        )
    return x


def evaluate_exact_f(problem: Problem, x) -> float:
    """Double-precision objective value of ``problem`` at ``x``."""
    return float(problem.f(_check_dim(problem, x)))


def evaluate_exact_g(problem: Problem, x) -> np.ndarray:
    """Analytic gradient of ``problem`` at ``x``."""
    return np.asarray(problem.g(_check_dim(problem, x)), dtype=float)


def fd_gradient(problem: Problem, x, rel_step: float | None = None) -> np.ndarray:
    """Central differences with step ``rel_step * (1 + |x_i|)`` (default ``problem.fd_step``)."""
    x = _check_dim(problem, x)
    if rel_step is None:
        rel_step = problem.fd_step
    out = np.empty(problem.dim)
    for i in range(problem.dim):
        h = rel_step * (1.0 + abs(x[i]))
        xp, xm = x.copy(), x.copy()
        xp[i] += h
        xm[i] -= h
        out[i] = (problem.f(xp) - problem.f(xm)) / (xp[i] - xm[i])
    return out


def fd_error(problem: Problem, x) -> float:
    """Largest per-coordinate error of the analytic gradient against ``fd_gradient``.

    Each coordinate is measured relative to ``max(|g_i|, 1e-3 max_j |g_j|)``
    so that components far below the gradient's scale, where differencing
    is dominated by rounding, do not dominate.
    """
    g = evaluate_exact_g(problem, x)
    fd = fd_gradient(problem, x)
    scale = np.maximum(np.abs(g), 1e-3 * max(float(np.max(np.abs(g))), 1e-12))
    return float(np.max(np.abs(fd - g) / scale))


def _least_squares(resid: Callable, jac: Callable):
    def f(x):
        r = resid(x)
        return float(r @ r)

    def g(x):
        return 2.0 * (jac(x).T @ resid(x))

    return f, g


_REGISTRY: dict[str, Callable[..., Problem]] = {}


def _register(fn):
    _REGISTRY[fn.__name__] = fn
    return fn


# ---------------------------------------------------------------------------
# fixed-dimension least-squares problems


@_register
def rosenbr() -> Problem:
    def r(x):
        return np.array([10.0 * (x[1] - x[0] ** 2), 1.0 - x[0]])

    def j(x):
        return np.array([[-20.0 * x[0], 10.0], [-1.0, 0.0]])

    return Problem("rosenbr", 2, [-1.2, 1.0], *_least_squares(r, j), f_lower_hint=0.0)


_BEALE_Y = np.array([1.5, 2.25, 2.625])
_BEALE_I = np.arange(1, 4)


@_register
def beale() -> Problem:
    def r(x):
        return _BEALE_Y - x[0] * (1.0 - x[1] ** _BEALE_I)

    def j(x):
        return np.column_stack(
            [-(1.0 - x[1] ** _BEALE_I), x[0] * _BEALE_I * x[1] ** (_BEALE_I - 1)]
        )

    return Problem("beale", 2, [1.0, 1.0], *_least_squares(r, j), f_lower_hint=0.0)


def _helix_theta(x):
    twopi = 2.0 * np.pi
    if x[0] > 0:
        return np.arctan(x[1] / x[0]) / twopi
    if x[0] < 0:
        return np.arctan(x[1] / x[0]) / twopi + 0.5
    return 0.25 * np.sign(x[1])


@_register
def helix() -> Problem:
    def r(x):
        return np.array(
            [10.0 * (x[2] - 10.0 * _helix_theta(x)), 10.0 * (np.hypot(x[0], x[1]) - 1.0), x[2]]
        )

    def j(x):
        rr = x[0] ** 2 + x[1] ** 2
        nrm = np.sqrt(rr)
        dth = np.array([-x[1], x[0]]) / (2.0 * np.pi * rr)
        return np.array(
            [
                [-100.0 * dth[0], -100.0 * dth[1], 10.0],
                [10.0 * x[0] / nrm, 10.0 * x[1] / nrm, 0.0],
                [0.0, 0.0, 1.0],
            ]
        )

    return Problem("helix", 3, [-1.0, 0.0, 0.0], *_least_squares(r, j), f_lower_hint=0.0)


@_register
def powellsg() -> Problem:
    s5, s10 = np.sqrt(5.0), np.sqrt(10.0)

    def r(x):
        return np.array(
            [
                x[0] + 10.0 * x[1],
                s5 * (x[2] - x[3]),
                (x[1] - 2.0 * x[2]) ** 2,
                s10 * (x[0] - x[3]) ** 2,
            ]
        )

    def j(x):
        a = 2.0 * (x[1] - 2.0 * x[2])
        b = 2.0 * s10 * (x[0] - x[3])
        return np.array(
            [
                [1.0, 10.0, 0.0, 0.0],
                [0.0, 0.0, s5, -s5],
                [0.0, a, -2.0 * a, 0.0],
                [b, 0.0, 0.0, -b],
            ]
        )

    return Problem("powellsg", 4, [3.0, -1.0, 0.0, 1.0], *_least_squares(r, j), f_lower_hint=0.0)


@_register
def powellbs() -> Problem:
    def r(x):
        return np.array([1e4 * x[0] * x[1] - 1.0, np.exp(-x[0]) + np.exp(-x[1]) - 1.0001])

    def j(x):
        return np.array([[1e4 * x[1], 1e4 * x[0]], [-np.exp(-x[0]), -np.exp(-x[1])]])

    return Problem(
        "powellbs", 2, [0.0, 1.0], *_least_squares(r, j), f_lower_hint=0.0, fd_rtol=1e-4
    )


@_register
def brownbs() -> Problem:
    def r(x):
        return np.array([x[0] - 1e6, x[1] - 2e-6, x[0] * x[1] - 2.0])

    def j(x):
        return np.array([[1.0, 0.0], [0.0, 1.0], [x[1], x[0]]])

    return Problem("brownbs", 2, [1.0, 1.0], *_least_squares(r, j), f_lower_hint=0.0,
                   fd_rtol=1e-4, fd_step=1e-3)


_BD_T = np.arange(1, 21) / 5.0


@_register
def brownden() -> Problem:
    et, st, ct = np.exp(_BD_T), np.sin(_BD_T), np.cos(_BD_T)

    def parts(x):
        return x[0] + _BD_T * x[1] - et, x[2] + x[3] * st - ct

    def r(x):
        a, b = parts(x)
        return a**2 + b**2

    def j(x):
        a, b = parts(x)
        return np.column_stack([2 * a, 2 * a * _BD_T, 2 * b, 2 * b * st])

    return Problem(
        "brownden", 4, [25.0, 5.0, -5.0, -1.0], *_least_squares(r, j), f_lower_hint=85822.2016
    )


_BARD_Y = np.array(
    [0.14, 0.18, 0.22, 0.25, 0.29, 0.32, 0.35, 0.39, 0.37, 0.58, 0.73, 0.96, 1.34, 2.10, 4.39]
)
_BARD_U = np.arange(1.0, 16.0)
_BARD_V = 16.0 - _BARD_U
_BARD_W = np.minimum(_BARD_U, _BARD_V)


@_register
def bard() -> Problem:
    def r(x):
        return _BARD_Y - (x[0] + _BARD_U / (_BARD_V * x[1] + _BARD_W * x[2]))

    def j(x):
        den2 = (_BARD_V * x[1] + _BARD_W * x[2]) ** 2
        return np.column_stack(
            [-np.ones_like(_BARD_U), _BARD_U * _BARD_V / den2, _BARD_U * _BARD_W / den2]
        )

    return Problem("bard", 3, [1.0, 1.0, 1.0], *_least_squares(r, j), f_lower_hint=8.21487e-3)


_GULF_T = np.arange(1, 100) / 100.0
_GULF_Y = 25.0 + (-50.0 * np.log(_GULF_T)) ** (2.0 / 3.0)


@_register
def gulf() -> Problem:
    # Only the 3-variable form has a public definition.
    def parts(x):
        d = _GULF_Y - x[1]
        ad = np.abs(d)
        p = ad ** x[2]
        e = np.exp(-p / x[0])
        return d, ad, p, e

    def r(x):
        return parts(x)[3] - _GULF_T

    def j(x):
        d, ad, p, e = parts(x)
        return np.column_stack(
            [
                e * p / x[0] ** 2,
                e * x[2] * ad ** (x[2] - 1.0) * np.sign(d) / x[0],
                -e * p * np.log(ad) / x[0],
            ]
        )

    return Problem("gulf", 3, [5.0, 2.5, 0.15], *_least_squares(r, j), f_lower_hint=0.0)


_KOW_Y = np.array(
    [0.1957, 0.1947, 0.1735, 0.1600, 0.0844, 0.0627, 0.0456, 0.0342, 0.0323, 0.0235, 0.0246]
)
_KOW_U = np.array([4.0, 2.0, 1.0, 0.5, 0.25, 0.167, 0.125, 0.1, 0.0833, 0.0714, 0.0625])


@_register
def kowosb() -> Problem:
    def parts(x):
        num = _KOW_U**2 + _KOW_U * x[1]
        den = _KOW_U**2 + _KOW_U * x[2] + x[3]
        return num, den

    def r(x):
        num, den = parts(x)
        return _KOW_Y - x[0] * num / den

    def j(x):
        num, den = parts(x)
        return -np.column_stack(
            [
                num / den,
                x[0] * _KOW_U / den,
                -x[0] * num * _KOW_U / den**2,
                -x[0] * num / den**2,
            ]
        )

    return Problem(
        "kowosb", 4, [0.25, 0.39, 0.415, 0.39], *_least_squares(r, j), f_lower_hint=3.07505e-4
    )


_BOX_T = np.arange(1, 11) / 10.0


@_register
def box() -> Problem:
    c = np.exp(-_BOX_T) - np.exp(-10.0 * _BOX_T)

    def r(x):
        return np.exp(-_BOX_T * x[0]) - np.exp(-_BOX_T * x[1]) - x[2] * c

    def j(x):
        return np.column_stack(
            [-_BOX_T * np.exp(-_BOX_T * x[0]), _BOX_T * np.exp(-_BOX_T * x[1]), -c]
        )

    return Problem("box", 3, [0.0, 10.0, 20.0], *_least_squares(r, j), f_lower_hint=0.0)


_JS_I = np.arange(1.0, 11.0)


@_register
def jensmp() -> Problem:
    def r(x):
        return 2.0 + 2.0 * _JS_I - (np.exp(_JS_I * x[0]) + np.exp(_JS_I * x[1]))

    def j(x):
        return np.column_stack([-_JS_I * np.exp(_JS_I * x[0]), -_JS_I * np.exp(_JS_I * x[1])])

    return Problem("jensmp", 2, [0.3, 0.4], *_least_squares(r, j), f_lower_hint=124.362)


_BIGGS_T = np.arange(1, 14) / 10.0
_BIGGS_Y = np.exp(-_BIGGS_T) - 5.0 * np.exp(-10.0 * _BIGGS_T) + 3.0 * np.exp(-4.0 * _BIGGS_T)


@_register
def biggs6() -> Problem:
    t = _BIGGS_T

    def r(x):
        return (
            x[2] * np.exp(-t * x[0])
            - x[3] * np.exp(-t * x[1])
            + x[5] * np.exp(-t * x[4])
            - _BIGGS_Y
        )

    def j(x):
        e1, e2, e5 = np.exp(-t * x[0]), np.exp(-t * x[1]), np.exp(-t * x[4])
        return np.column_stack(
            [-t * x[2] * e1, t * x[3] * e2, e1, -e2, -t * x[5] * e5, e5]
        )

    return Problem(
        "biggs6", 6, [1.0, 2.0, 1.0, 1.0, 1.0, 1.0], *_least_squares(r, j), f_lower_hint=0.0
    )


_OSA_Y = np.array(
    [
        0.844, 0.908, 0.932, 0.936, 0.925, 0.908, 0.881, 0.850, 0.818, 0.784, 0.751,
        0.718, 0.685, 0.658, 0.628, 0.603, 0.580, 0.558, 0.538, 0.522, 0.506, 0.490,
        0.478, 0.467, 0.457, 0.448, 0.438, 0.431, 0.424, 0.420, 0.414, 0.411, 0.406,
    ]
)
_OSA_T = 10.0 * np.arange(33)


@_register
def osbornea() -> Problem:
    t = _OSA_T

    def r(x):
        return _OSA_Y - (x[0] + x[1] * np.exp(-t * x[3]) + x[2] * np.exp(-t * x[4]))

    def j(x):
        e4, e5 = np.exp(-t * x[3]), np.exp(-t * x[4])
        return -np.column_stack(
            [np.ones_like(t), e4, e5, -t * x[1] * e4, -t * x[2] * e5]
        )

    return Problem(
        "osbornea",
        5,
        [0.5, 1.5, -1.0, 0.01, 0.02],
        *_least_squares(r, j),
        f_lower_hint=5.46489e-5,
    )


_OSB_Y = np.array(
    [
        1.366, 1.191, 1.112, 1.013, 0.991, 0.885, 0.831, 0.847, 0.786, 0.725, 0.746,
        0.679, 0.608, 0.655, 0.616, 0.606, 0.602, 0.626, 0.651, 0.724, 0.649, 0.649,
        0.694, 0.644, 0.624, 0.661, 0.612, 0.558, 0.533, 0.495, 0.500, 0.423, 0.395,
        0.375, 0.372, 0.391, 0.396, 0.405, 0.428, 0.429, 0.523, 0.562, 0.607, 0.653,
        0.672, 0.708, 0.633, 0.668, 0.645, 0.632, 0.591, 0.559, 0.597, 0.625, 0.739,
        0.710, 0.729, 0.720, 0.636, 0.581, 0.428, 0.292, 0.162, 0.098, 0.054,
    ]
)
_OSB_T = np.arange(65) / 10.0


@_register
def osborneb() -> Problem:
    t = _OSB_T

    def parts(x):
        e1 = np.exp(-t * x[4])
        d = [t - x[8], t - x[9], t - x[10]]
        e = [np.exp(-d[0] ** 2 * x[5]), np.exp(-d[1] ** 2 * x[6]), np.exp(-d[2] ** 2 * x[7])]
        return e1, d, e

    def r(x):
        e1, _, e = parts(x)
        return _OSB_Y - (x[0] * e1 + x[1] * e[0] + x[2] * e[1] + x[3] * e[2])

    def j(x):
        e1, d, e = parts(x)
        jm = np.empty((t.size, 11))
        jm[:, 0] = e1
        jm[:, 4] = -t * x[0] * e1
        for k in range(3):
            jm[:, 1 + k] = e[k]
            jm[:, 5 + k] = -d[k] ** 2 * x[1 + k] * e[k]
            jm[:, 8 + k] = 2.0 * d[k] * x[5 + k] * x[1 + k] * e[k]
        return -jm

    return Problem(
        "osborneb",
        11,
        [1.3, 0.65, 0.65, 0.7, 0.6, 3.0, 5.0, 7.0, 2.0, 4.5, 5.5],
        *_least_squares(r, j),
        f_lower_hint=4.01377e-2,
    )


_MEYER_Y = np.array(
    [
        34780.0, 28610.0, 23650.0, 19630.0, 16370.0, 13720.0, 11540.0, 9744.0,
        8261.0, 7030.0, 6005.0, 5147.0, 4427.0, 3820.0, 3307.0, 2872.0,
    ]
)
_MEYER_T = 45.0 + 5.0 * np.arange(1, 17)


@_register
def meyer3() -> Problem:
    t = _MEYER_T

    def r(x):
        return x[0] * np.exp(x[1] / (t + x[2])) - _MEYER_Y

    def j(x):
        e = np.exp(x[1] / (t + x[2]))
        return np.column_stack([e, x[0] * e / (t + x[2]), -x[0] * e * x[1] / (t + x[2]) ** 2])

    return Problem(
        "meyer3", 3, [0.02, 4000.0, 250.0], *_least_squares(r, j), f_lower_hint=87.9458, fd_rtol=1e-4
    )


@_register
def engval2() -> Problem:
    # Only the 3-variable form has a public definition.
    def r(x):
        x1, x2, x3 = x
        return np.array(
            [
                x1**2 + x2**2 + x3**2 - 1.0,
                x1**2 + x2**2 + (x3 - 2.0) ** 2 - 1.0,
                x1 + x2 + x3 - 1.0,
                x1 + x2 - x3 + 1.0,
                x1**3 + 3.0 * x2**2 + (5.0 * x3 - x1 + 1.0) ** 2 - 36.0,
            ]
        )

    def j(x):
        x1, x2, x3 = x
        q = 5.0 * x3 - x1 + 1.0
        return np.array(
            [
                [2 * x1, 2 * x2, 2 * x3],
                [2 * x1, 2 * x2, 2 * (x3 - 2.0)],
                [1.0, 1.0, 1.0],
                [1.0, 1.0, -1.0],
                [3 * x1**2 - 2 * q, 6 * x2, 10 * q],
            ]
        )

    return Problem("engval2", 3, [1.0, 2.0, 0.0], *_least_squares(r, j), f_lower_hint=0.0)


@_register
def cube() -> Problem:
    def r(x):
        return np.array([x[0] - 1.0, 10.0 * (x[1] - x[0] ** 3)])

    def j(x):
        return np.array([[1.0, 0.0], [-30.0 * x[0] ** 2, 10.0]])

    return Problem("cube", 2, [-1.2, 1.0], *_least_squares(r, j), f_lower_hint=0.0)


# ---------------------------------------------------------------------------
# fixed-dimension problems written directly


@_register
def cliff() -> Problem:
    def f(x):
        return (0.01 * x[0] - 0.03) ** 2 - x[0] + x[1] + np.exp(20.0 * (x[0] - x[1]))

    def g(x):
        e = np.exp(20.0 * (x[0] - x[1]))
        return np.array([0.02 * (0.01 * x[0] - 0.03) - 1.0 + 20.0 * e, 1.0 - 20.0 * e])

    return Problem("cliff", 2, [0.0, -1.0], f, g, f_lower_hint=0.19978)


@_register
def sisser() -> Problem:
    def f(x):
        return 3.0 * x[0] ** 4 - 2.0 * (x[0] * x[1]) ** 2 + 3.0 * x[1] ** 4

    def g(x):
        return np.array(
            [
                12.0 * x[0] ** 3 - 4.0 * x[0] * x[1] ** 2,
                12.0 * x[1] ** 3 - 4.0 * x[0] ** 2 * x[1],
            ]
        )

    return Problem("sisser", 2, [1.0, 0.1], f, g, f_lower_hint=0.0)


# ---------------------------------------------------------------------------
# variable-dimension problems


@_register
def freuroth(n: int = 4) -> Problem:
    def r(x):
        a, b = x[:-1], x[1:]
        out = np.empty(2 * (n - 1))
        out[0::2] = -13.0 + a + ((5.0 - b) * b - 2.0) * b
        out[1::2] = -29.0 + a + ((b + 1.0) * b - 14.0) * b
        return out

    def j(x):
        b = x[1:]
        jm = np.zeros((2 * (n - 1), n))
        i = np.arange(n - 1)
        jm[2 * i, i] = 1.0
        jm[2 * i + 1, i] = 1.0
        jm[2 * i, i + 1] = 10.0 * b - 3.0 * b**2 - 2.0
        jm[2 * i + 1, i + 1] = 3.0 * b**2 + 2.0 * b - 14.0
        return jm

    x0 = np.where(np.arange(n) % 2 == 0, 0.5, -2.0)
    return Problem("freuroth", n, x0, *_least_squares(r, j))


@_register
def watson(n: int = 12) -> Problem:
    t = np.arange(1, 30) / 29.0
    jj = np.arange(n)
    # powers t^(j-1) and (j-1) t^(j-2)
    tp = t[:, None] ** jj[None, :]
    dtp = np.zeros_like(tp)
    dtp[:, 1:] = jj[None, 1:] * tp[:, :-1]

    def r(x):
        s2 = tp @ x
        out = np.empty(31)
        out[:29] = dtp @ x - s2**2 - 1.0
        out[29] = x[0]
        out[30] = x[1] - x[0] ** 2 - 1.0
        return out

    def j(x):
        s2 = tp @ x
        jm = np.zeros((31, n))
        jm[:29] = dtp - 2.0 * s2[:, None] * tp
        jm[29, 0] = 1.0
        jm[30, 0] = -2.0 * x[0]
        jm[30, 1] = 1.0
        return jm

    return Problem("watson", n, np.zeros(n), *_least_squares(r, j))


@_register
def penalty1(n: int = 10) -> Problem:
    sa = np.sqrt(1e-5)

    def r(x):
        return np.append(sa * (x - 1.0), x @ x - 0.25)

    def j(x):
        return np.vstack([sa * np.eye(n), 2.0 * x])

    return Problem("penalty1", n, np.arange(1.0, n + 1.0), *_least_squares(r, j))


@_register
def penalty2(n: int = 10) -> Problem:
    sa = np.sqrt(1e-5)
    i = np.arange(2, n + 1)
    y = np.exp(i / 10.0) + np.exp((i - 1) / 10.0)
    em1 = np.exp(-0.1)
    wts = np.arange(n, 0, -1.0)

    def r(x):
        e = np.exp(x / 10.0)
        return np.concatenate(
            [
                [x[0] - 0.2],
                sa * (e[1:] + e[:-1] - y),
                sa * (e[1:] - em1),
                [wts @ x**2 - 1.0],
            ]
        )

    def j(x):
        e = np.exp(x / 10.0) / 10.0
        jm = np.zeros((2 * n, n))
        jm[0, 0] = 1.0
        k = np.arange(1, n)
        jm[k, k] = sa * e[1:]
        jm[k, k - 1] = sa * e[:-1]
        jm[n - 1 + k, k] = sa * e[1:]
        jm[2 * n - 1] = 2.0 * wts * x
        return jm

    return Problem("penalty2", n, np.full(n, 0.5), *_least_squares(r, j))


@_register
def vardim(n: int = 10) -> Problem:
    w = np.arange(1.0, n + 1.0)

    def r(x):
        s = w @ (x - 1.0)
        return np.concatenate([x - 1.0, [s, s**2]])

    def j(x):
        s = w @ (x - 1.0)
        return np.vstack([np.eye(n), w, 2.0 * s * w])

    return Problem("vardim", n, 1.0 - w / n, *_least_squares(r, j), f_lower_hint=0.0)


@_register
def broyden3d(n: int = 10) -> Problem:
    def r(x):
        xp = np.pad(x, 1)
        return (3.0 - 2.0 * x) * x - xp[:-2] - 2.0 * xp[2:] + 1.0

    def j(x):
        return np.diag(3.0 - 4.0 * x) - np.eye(n, k=-1) - 2.0 * np.eye(n, k=1)

    return Problem("broyden3d", n, -np.ones(n), *_least_squares(r, j), f_lower_hint=0.0)


@_register
def broydenbd(n: int = 10) -> Problem:
    lower, upper = 5, 1
    band = np.zeros((n, n))
    for i in range(n):
        for k in range(max(0, i - lower), min(n, i + upper + 1)):
            if k != i:
                band[i, k] = 1.0

    def r(x):
        return x * (2.0 + 5.0 * x**2) + 1.0 - band @ (x * (1.0 + x))

    def j(x):
        return np.diag(2.0 + 15.0 * x**2) - band * (1.0 + 2.0 * x)[None, :]

    return Problem("broydenbd", n, -np.ones(n), *_least_squares(r, j), f_lower_hint=0.0)


@_register
def arglina(n: int = 10) -> Problem:
    m = 2 * n
    jm = np.vstack([np.eye(n), np.zeros((m - n, n))]) - 2.0 / m

    def r(x):
        return jm @ x - 1.0

    return Problem("arglina", n, np.ones(n), *_least_squares(r, lambda x: jm), f_lower_hint=float(n))


@_register
def arglinb(n: int = 10) -> Problem:
    m = 2 * n
    jm = np.outer(np.arange(1.0, m + 1.0), np.arange(1.0, n + 1.0))

    def r(x):
        return jm @ x - 1.0

    return Problem("arglinb", n, np.ones(n), *_least_squares(r, lambda x: jm))


@_register
def arglinc(n: int = 10) -> Problem:
    m = 2 * n
    jm = np.zeros((m, n))
    jm[1:-1, 1:-1] = np.outer(np.arange(1.0, m - 1.0), np.arange(2.0, n))

    def r(x):
        return jm @ x - 1.0

    return Problem("arglinc", n, np.ones(n), *_least_squares(r, lambda x: jm))


@_register
def chebyqad(n: int = 10) -> Problem:
    m = n
    i = np.arange(1.0, m + 1.0)
    shift = np.zeros(m)
    shift[1::2] = 1.0 / (i[1::2] ** 2 - 1.0)

    def cheb(x):
        # T_i(y) and dT_i/dy for i = 1..m at y = 2x - 1
        y = 2.0 * x - 1.0
        t = np.empty((m + 1, n))
        dt = np.empty((m + 1, n))
        t[0], t[1] = 1.0, y
        dt[0], dt[1] = 0.0, 1.0
        for k in range(1, m):
            t[k + 1] = 2.0 * y * t[k] - t[k - 1]
            dt[k + 1] = 2.0 * t[k] + 2.0 * y * dt[k] - dt[k - 1]
        return t[1:], dt[1:]

    def r(x):
        t, _ = cheb(x)
        return t.mean(axis=1) + shift

    def j(x):
        _, dt = cheb(x)
        return 2.0 * dt / n

    return Problem("chebyqad", n, np.arange(1.0, n + 1.0) / (n + 1), *_least_squares(r, j))


@_register
def morebv(n: int = 12) -> Problem:
    h = 1.0 / (n + 1)
    t = h * np.arange(1, n + 1)

    def r(x):
        xp = np.pad(x, 1)
        return 2.0 * x - xp[:-2] - xp[2:] + 0.5 * h**2 * (x + t + 1.0) ** 3

    def j(x):
        return (
            np.diag(2.0 + 1.5 * h**2 * (x + t + 1.0) ** 2)
            - np.eye(n, k=1)
            - np.eye(n, k=-1)
        )

    return Problem("morebv", n, t * (t - 1.0), *_least_squares(r, j), f_lower_hint=0.0)


@_register
def brownal(n: int = 10) -> Problem:
    def r(x):
        out = x + x.sum() - (n + 1.0)
        out[-1] = np.prod(x) - 1.0
        return out

    def j(x):
        jm = np.eye(n) + 1.0
        jm[-1] = [np.prod(np.delete(x, k)) for k in range(n)]
        return jm

    return Problem("brownal", n, np.full(n, 0.5), *_least_squares(r, j), f_lower_hint=0.0)


@_register
def engval1(n: int = 10) -> Problem:
    def f(x):
        q = x[:-1] ** 2 + x[1:] ** 2
        return float(np.sum(q**2 - 4.0 * x[:-1] + 3.0))

    def g(x):
        q = x[:-1] ** 2 + x[1:] ** 2
        out = np.zeros(n)
        out[:-1] += 4.0 * q * x[:-1] - 4.0
        out[1:] += 4.0 * q * x[1:]
        return out

    return Problem("engval1", n, np.full(n, 2.0), f, g)


@_register
def woods(n: int = 12) -> Problem:
    if n % 4:
        raise ValueError("woods needs a dimension divisible by 4")

    def f(x):
        a, b, c, d = x[0::4], x[1::4], x[2::4], x[3::4]
        return float(
            np.sum(
                100.0 * (b - a**2) ** 2
                + (1.0 - a) ** 2
                + 90.0 * (d - c**2) ** 2
                + (1.0 - c) ** 2
                + 10.1 * ((b - 1.0) ** 2 + (d - 1.0) ** 2)
                + 19.8 * (b - 1.0) * (d - 1.0)
            )
        )

    def g(x):
        a, b, c, d = x[0::4], x[1::4], x[2::4], x[3::4]
        out = np.empty(n)
        out[0::4] = -400.0 * a * (b - a**2) - 2.0 * (1.0 - a)
        out[1::4] = 200.0 * (b - a**2) + 20.2 * (b - 1.0) + 19.8 * (d - 1.0)
        out[2::4] = -360.0 * c * (d - c**2) - 2.0 * (1.0 - c)
        out[3::4] = 180.0 * (d - c**2) + 20.2 * (d - 1.0) + 19.8 * (b - 1.0)
        return out

    return Problem("woods", n, np.tile([-3.0, -1.0, -3.0, -1.0], n // 4), f, g, f_lower_hint=0.0)


@_register
def tridia(n: int = 10) -> Problem:
    # convex quadratic: (x1 - 1)^2 + sum_i i (2 x_i - x_{i-1})^2
    w = np.arange(2.0, n + 1.0)

    def f(x):
        d = 2.0 * x[1:] - x[:-1]
        return float((x[0] - 1.0) ** 2 + w @ d**2)

    def g(x):
        d = 2.0 * x[1:] - x[:-1]
        out = np.zeros(n)
        out[0] = 2.0 * (x[0] - 1.0)
        out[1:] += 4.0 * w * d
        out[:-1] -= 2.0 * w * d
        return out

    return Problem("tridia", n, np.ones(n), f, g, f_lower_hint=0.0)


@_register
def dqrtic(n: int = 10) -> Problem:
    c = np.arange(1.0, n + 1.0)

    def f(x):
        return float(np.sum((x - c) ** 4))

    def g(x):
        return 4.0 * (x - c) ** 3

    return Problem("dqrtic", n, np.full(n, 2.0), f, g, f_lower_hint=0.0)


def _dixmaan(name: str, n: int, alpha, beta, gamma, delta, k) -> Problem:
    if n % 3:
        raise ValueError(f"{name} needs a dimension divisible by 3")
    m = n // 3
    ratio = np.arange(1.0, n + 1.0) / n
    w1 = alpha * ratio ** k[0]
    w2 = beta * ratio[: n - 1] ** k[1]
    w3 = gamma * ratio[: 2 * m] ** k[2]
    w4 = delta * ratio[:m] ** k[3]

    def f(x):
        q = x[1:] + x[1:] ** 2
        return float(
            1.0
            + w1 @ x**2
            + w2 @ (x[:-1] ** 2 * q**2)
            + w3 @ (x[: 2 * m] ** 2 * x[m:] ** 4)
            + w4 @ (x[:m] * x[2 * m :])
        )

    def g(x):
        out = 2.0 * w1 * x
        q = x[1:] + x[1:] ** 2
        out[:-1] += 2.0 * w2 * x[:-1] * q**2
        out[1:] += 2.0 * w2 * x[:-1] ** 2 * q * (1.0 + 2.0 * x[1:])
        out[: 2 * m] += 2.0 * w3 * x[: 2 * m] * x[m:] ** 4
        out[m:] += 4.0 * w3 * x[: 2 * m] ** 2 * x[m:] ** 3
        out[:m] += w4 * x[2 * m :]
        out[2 * m :] += w4 * x[:m]
        return out

    return Problem(name, n, np.full(n, 2.0), f, g, f_lower_hint=1.0)


@_register
def dixmaana(n: int = 12) -> Problem:
    return _dixmaan("dixmaana", n, 1.0, 0.0, 0.125, 0.125, (0, 0, 0, 0))


@_register
def dixmaanj(n: int = 12) -> Problem:
    return _dixmaan("dixmaanj", n, 1.0, 0.0625, 0.0625, 0.0625, (2, 0, 0, 2))


@_register
def edensch(n: int = 5) -> Problem:
    def f(x):
        a, b = x[:-1], x[1:]
        return float(16.0 + np.sum((a - 2.0) ** 4 + (a * b - 2.0 * b) ** 2 + (b + 1.0) ** 2))

    def g(x):
        a, b = x[:-1], x[1:]
        p = a * b - 2.0 * b
        out = np.zeros(n)
        out[:-1] += 4.0 * (a - 2.0) ** 3 + 2.0 * p * b
        out[1:] += 2.0 * p * (a - 2.0) + 2.0 * (b + 1.0)
        return out

    return Problem("edensch", n, np.zeros(n), f, g)


@_register
def cosine(n: int = 2) -> Problem:
    def f(x):
        return float(np.sum(np.cos(x[:-1] ** 2 - 0.5 * x[1:])))

    def g(x):
        s = np.sin(x[:-1] ** 2 - 0.5 * x[1:])
        out = np.zeros(n)
        out[:-1] -= 2.0 * x[:-1] * s
        out[1:] += 0.5 * s
        return out

    return Problem("cosine", n, np.ones(n), f, g, f_lower_hint=-(n - 1.0))


@_register
def arwhead(n: int = 10) -> Problem:
    def f(x):
        q = x[:-1] ** 2 + x[-1] ** 2
        return float(np.sum(q**2 - 4.0 * x[:-1] + 3.0))

    def g(x):
        q = x[:-1] ** 2 + x[-1] ** 2
        out = np.zeros(n)
        out[:-1] = 4.0 * q * x[:-1] - 4.0
        out[-1] = np.sum(4.0 * q * x[-1])
        return out

    return Problem("arwhead", n, np.ones(n), f, g, f_lower_hint=0.0)


# ---------------------------------------------------------------------------


def problem_names() -> list[str]:
    return list(_REGISTRY)


def get_problem(name: str, n: int | None = None) -> Problem:
    """Build the named problem, optionally at dimension ``n``."""
    try:
        ctor = _REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown problem {name!r}") from None
    return ctor() if n is None else ctor(n)


_CACHE: dict[str, Problem] = {}


def catalog() -> list[Problem]:
    """All registered problems at their default dimension."""
    for name in _REGISTRY:
        if name not in _CACHE:
            _CACHE[name] = get_problem(name)
    return [_CACHE[name] for name in _REGISTRY]
