import zlib

import numpy as np
import pytest

from dyntr.problems import (
    catalog,
    evaluate_exact_f,
    evaluate_exact_g,
    fd_error,
    get_problem,
    problem_names,
)

MANDATORY = {
    "rosenbr": 2, "beale": 2, "helix": 3, "powellsg": 4, "powellbs": 2, "brownbs": 2,
    "brownden": 4, "bard": 3, "gulf": 3, "kowosb": 4, "box": 3, "freuroth": 4,
    "watson": 12, "penalty1": 10, "penalty2": 10, "vardim": 10, "broyden3d": 10,
    "broydenbd": 10, "arglina": 10, "arglinb": 10, "arglinc": 10, "chebyqad": 10,
    "morebv": 12, "biggs6": 6, "osbornea": 5, "osborneb": 11, "meyer3": 3, "jensmp": 2,
    "brownal": 10, "engval1": 10, "engval2": 3, "cliff": 2, "cube": 2, "sisser": 2,
    "woods": 12, "tridia": 10, "dqrtic": 10, "dixmaana": 12, "dixmaanj": 12,
    "edensch": 5, "cosine": 2, "arwhead": 10,
}

# standard starting values from the literature
START_VALUES = {
    "rosenbr": 24.2, "beale": 14.203125, "helix": 2500.0, "powellsg": 215.0,
    "bard": 41.68170, "kowosb": 5.313172e-3, "box": 1031.154, "jensmp": 4171.306,
    "brownden": 7.926693e6, "meyer3": 1.693608e9, "watson": 30.0, "penalty1": 148032.6,
    "brownal": 273.2480, "osborneb": 2.093420, "osbornea": 0.8790260, "biggs6": 0.7790700,
    "broyden3d": 21.0,
}


def test_catalog_has_the_42_problems_at_campaign_dimensions():
    dims = {p.name: p.dim for p in catalog()}
    assert dims == MANDATORY
    assert len(problem_names()) == len(set(problem_names())) == 42


@pytest.mark.parametrize("name,value", sorted(START_VALUES.items()))
def test_start_values(name, value):
    p = get_problem(name)
    assert evaluate_exact_f(p, p.x0) == pytest.approx(value, rel=1e-5)


def test_rosenbrock_examples():
    p = get_problem("rosenbr")
    assert evaluate_exact_f(p, [1.0, 1.0]) == 0.0
    assert np.array_equal(evaluate_exact_g(p, [1.0, 1.0]), [0.0, 0.0])
    assert evaluate_exact_f(p, [-1.2, 1.0]) == pytest.approx(24.2, rel=1e-14)


def test_beale_minimizer():
    p = get_problem("beale")
    assert evaluate_exact_f(p, [3.0, 0.5]) == pytest.approx(0.0, abs=1e-30)


def test_tridia_gradient_is_affine():
    p = get_problem("tridia")
    g0 = evaluate_exact_g(p, np.zeros(p.dim))
    x = np.random.default_rng(0).standard_normal(p.dim)
    assert np.allclose(evaluate_exact_g(p, 2 * x) - g0, 2 * (evaluate_exact_g(p, x) - g0), rtol=1e-12)


def test_dimension_mismatch_raises():
    p = get_problem("rosenbr")
    with pytest.raises(ValueError):
        evaluate_exact_f(p, [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        evaluate_exact_g(p, [1.0])


def test_unknown_problem():
    with pytest.raises(KeyError):
        get_problem("nosuch")


def test_variable_dimension_constructor():
    assert get_problem("arwhead", 25).dim == 25
    assert get_problem("tridia", 4).x0.shape == (4,)


def test_x0_is_read_only():
    p = get_problem("rosenbr")
    with pytest.raises(ValueError):
        p.x0[0] = 0.0


@pytest.mark.parametrize("problem", catalog(), ids=lambda p: p.name)
def test_finite_at_start_and_fd_consistent(problem):
    assert np.isfinite(evaluate_exact_f(problem, problem.x0))
    assert fd_error(problem, problem.x0) <= problem.fd_rtol
    rng = np.random.default_rng(zlib.crc32(problem.name.encode()))
    for _ in range(5):
        x = problem.x0 + rng.uniform(-1.0, 1.0, problem.dim)
        assert fd_error(problem, x) <= problem.fd_rtol
