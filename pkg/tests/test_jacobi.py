import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from sibi.jacobi import jacobi_eigh


def symmetric(n_max=12):
    return st.integers(1, n_max).flatmap(
        lambda n: arrays(np.float64, (n, n), elements=st.floats(-10, 10)).map(lambda a: (a + a.T) / 2)
    )


@given(symmetric())
def test_matches_lapack(a):
    w, v = jacobi_eigh(a)
    ref = np.linalg.eigvalsh(a)
    scale = max(1.0, np.abs(a).max())
    assert np.allclose(w, ref, atol=1e-12 * scale, rtol=0)
    assert np.allclose(v.T @ v, np.eye(len(a)), atol=1e-12)
    assert np.allclose(v @ np.diag(w) @ v.T, a, atol=1e-11 * scale)
    assert np.all(np.diff(w) >= 0)


@given(symmetric(8), st.integers(0, 2**32 - 1))
def test_warm_start_gives_same_spectrum(a, seed):
    q, _ = np.linalg.qr(np.random.default_rng(seed).normal(size=a.shape))
    w0, _ = jacobi_eigh(a)
    w1, v1 = jacobi_eigh(a, basis=q)
    scale = max(1.0, np.abs(a).max())
    assert np.allclose(w0, w1, atol=1e-12 * scale)
    assert np.allclose(v1 @ np.diag(w1) @ v1.T, a, atol=1e-11 * scale)


def test_deterministic_bitwise():
    rng = np.random.default_rng(7)
    a = rng.normal(size=(38, 38))
    a = a + a.T
    w1, v1 = jacobi_eigh(a)
    w2, v2 = jacobi_eigh(a)
    assert np.array_equal(w1, w2) and np.array_equal(v1, v2)


def test_degenerate_and_trivial_cases():
    w, v = jacobi_eigh(np.eye(4) * 3)
    assert np.array_equal(w, [3.0] * 4) and np.array_equal(v, np.eye(4))
    w, v = jacobi_eigh(np.zeros((3, 3)))
    assert np.array_equal(w, np.zeros(3))
    w, v = jacobi_eigh([[2.5]])
    assert w.tolist() == [2.5] and v.tolist() == [[1.0]]
    w, v = jacobi_eigh(np.zeros((0, 0)))
    assert w.shape == (0,)


def test_rejects_non_symmetric():
    with pytest.raises(ValueError):
        jacobi_eigh([[1.0, 2.0], [0.0, 1.0]])
    with pytest.raises(ValueError):
        jacobi_eigh(np.ones((2, 3)))


def test_block_sized_problem_accuracy():
    rng = np.random.default_rng(1)
    a = rng.normal(size=(38, 38))
    a = a + a.T
    w, _ = jacobi_eigh(a)
    assert np.max(np.abs(w - np.linalg.eigvalsh(a))) < 1e-12
