import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from dyntr.lsr1 import LSR1

from conftest import diag_lsr1

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def test_empty_state_is_identity():
    H = LSR1(3)
    v = np.array([1.0, -2.0, 0.5])
    assert np.array_equal(H.apply(v), v)
    assert np.array_equal(H.apply(np.zeros(3)), np.zeros(3))
    assert H.norm_lower_bound() == 1.0


def test_zero_correction_pair_is_skipped():
    H = LSR1(2)
    s = np.array([1.0, 2.0])
    assert not H.update(s, s.copy())
    assert len(H) == 0 and H.n_skipped == 1
    assert np.allclose(H.apply([3.0, 4.0]), [3.0, 4.0])


def test_two_coordinate_pairs_reproduce_diagonal(diag12):
    assert len(diag12) == 1  # the first pair carries no correction
    assert np.allclose(diag12.apply([1.0, 1.0]), [1.0, 2.0])
    assert np.allclose(diag12.to_dense(), np.diag([1.0, 2.0]))
    assert 1.9 <= diag12.norm_lower_bound() <= 2.0 + 1e-12


def test_fifo_eviction():
    rng = np.random.default_rng(1)
    A = rng.standard_normal((5, 5))
    A = A @ A.T + np.eye(5)
    H = LSR1(5, memory=2, rescale="none")
    pairs = []
    for _ in range(3):
        s = rng.standard_normal(5)
        assert H.update(s, A @ s)
        pairs.append(s)
    assert len(H) == 2
    stored = [p[0] for p in H.pairs]
    assert np.array_equal(stored[0], pairs[1]) and np.array_equal(stored[1], pairs[2])

    H2 = LSR1(5, memory=2, rescale="none")
    for s in pairs[1:]:
        H2.update(s, A @ s)
    v = rng.standard_normal(5)
    assert np.allclose(H.apply(v), H2.apply(v))


def test_huge_curvature_shows_in_norm_bound():
    c = 1e6
    H = LSR1(3, rescale="none")
    s = np.array([1.0, 0.0, 0.0])
    H.update(s, c * s)
    assert H.norm_lower_bound() >= 0.9 * c


def test_rescale_policies():
    s, y = np.array([1.0, 0.0]), np.array([4.0, 0.0])
    every = LSR1(2, rescale="every")
    first = LSR1(2, rescale="first")
    for H in (every, first):
        H.update(s, y)
        assert H.init_scale == pytest.approx(4.0)
    s2, y2 = np.array([0.0, 1.0]), np.array([0.0, 9.0])
    every.update(s2, y2)
    first.update(s2, y2)
    assert every.init_scale == pytest.approx(9.0)
    assert first.init_scale == pytest.approx(4.0)
    none = LSR1(2, rescale="none")
    none.update(s, y)
    assert none.init_scale == 1.0
    with pytest.raises(ValueError):
        LSR1(2, rescale="sometimes")


def test_errors():
    H = LSR1(3)
    with pytest.raises(ValueError):
        H.apply([1.0, 2.0])
    with pytest.raises(ValueError):
        H.update(np.zeros(3), np.ones(3))
    with pytest.raises(ValueError):
        H.update(np.ones(2), np.ones(2))
    with pytest.raises(ValueError):
        LSR1(3, memory=0)


def test_negative_curvature_pair_keeps_scale():
    H = LSR1(2, rescale="every")
    H.update(np.array([1.0, 0.0]), np.array([-1.0, 0.0]))
    assert H.init_scale == 1.0
    assert H.apply([1.0, 0.0]) == pytest.approx([-1.0, 0.0])


@st.composite
def quadratic_and_steps(draw):
    n = draw(st.integers(2, 6))
    M = draw(arrays(np.float64, (n, n), elements=finite))
    A = (M + M.T) / 2
    k = draw(st.integers(1, 8))
    steps = [draw(arrays(np.float64, n, elements=finite)) for _ in range(k)]
    return A, steps


@given(quadratic_and_steps(), st.sampled_from(["every", "first", "none"]))
def test_secant_property_and_symmetry(data, policy):
    A, steps = data
    n = A.shape[0]
    H = LSR1(n, memory=4, rescale=policy)
    for s in steps:
        assume(np.linalg.norm(s) > 1e-3)
        y = A @ s
        if H.update(s, y):
            # the most recent stored pair is reproduced exactly
            scale = max(1.0, np.linalg.norm(y), np.linalg.norm(H.apply(s)))
            assert np.linalg.norm(H.apply(s) - y) <= 1e-6 * scale
    rng = np.random.default_rng(0)
    u, v = rng.standard_normal(n), rng.standard_normal(n)
    lhs, rhs = u @ H.apply(v), v @ H.apply(u)
    # rounding scales with the summed magnitude of the rank-one terms, not with ||H||
    terms = abs(H.init_scale) * np.linalg.norm(u) * np.linalg.norm(v)
    terms += np.sum(np.abs(H._dinv * (H._u.T @ u) * (H._u.T @ v)))
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, terms)
    assert len(H) <= 4


@given(quadratic_and_steps())
def test_apply_is_linear(data):
    A, steps = data
    n = A.shape[0]
    H = LSR1(n)
    for s in steps:
        if np.linalg.norm(s) > 1e-3:
            H.update(s, A @ s)
    D = H.to_dense()
    v = np.arange(1.0, n + 1)
    assert np.allclose(H.apply(v), D @ v, rtol=1e-9, atol=1e-9 * max(1.0, np.abs(D).max()))
