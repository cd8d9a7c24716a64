import numpy as np
import pytest

from fpthresh.linalg import column_norms, matvec, matvec_t, spectral_norm


def naive_matvec(A, x):
    m, n = A.shape
    out = [0.0] * m
    for i in range(m):
        for j in range(n):
            out[i] += A[i, j] * x[j]
    return np.array(out)


def test_matvec_examples():
    np.testing.assert_array_equal(matvec(np.eye(2), [3.0, 4.0]), [3.0, 4.0])
    np.testing.assert_array_equal(matvec(np.zeros((3, 2)), [1.0, 2.0]), np.zeros(3))
    np.testing.assert_array_equal(matvec_t(np.eye(2), [3.0, 4.0]), [3.0, 4.0])
    c = np.array([[1.0], [2.0], [3.0]])
    y = np.array([0.5, -1.0, 2.0])
    np.testing.assert_allclose(matvec_t(c, y), [c[:, 0] @ y])


def test_against_naive_loops():
    rng = np.random.default_rng(0)
    A = rng.standard_normal((3, 3))
    x = rng.standard_normal(3)
    np.testing.assert_allclose(matvec(A, x), naive_matvec(A, x), rtol=0, atol=1e-13)
    np.testing.assert_allclose(matvec_t(A, x), naive_matvec(A.T.copy(), x), rtol=0, atol=1e-13)
    B = rng.standard_normal((5, 4))
    naive = np.array([sum(B[i, j] ** 2 for i in range(5)) ** 0.5 for j in range(4)])
    np.testing.assert_allclose(column_norms(B), naive, rtol=0, atol=1e-13)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        matvec(np.eye(2), [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        matvec_t(np.eye(2), [1.0])


def test_column_norm_examples():
    np.testing.assert_array_equal(column_norms(np.eye(3)), np.ones(3))
    assert column_norms(np.full((4, 1), 2.0))[0] == 4.0


def test_adjoint_consistency():
    rng = np.random.default_rng(1)
    for _ in range(20):
        A = rng.standard_normal((7, 11))
        x, y = rng.standard_normal(11), rng.standard_normal(7)
        lhs, rhs = matvec(A, x) @ y, x @ matvec_t(A, y)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


def test_spectral_norm_known():
    assert spectral_norm(np.eye(6)) == pytest.approx(1.0, abs=1e-10)
    assert spectral_norm(np.diag([3.0, 1.0])) == pytest.approx(3.0, abs=1e-10)


def test_spectral_norm_matches_svd():
    rng = np.random.default_rng(2)
    for _ in range(5):
        A = rng.standard_normal((20, 50))
        ref = np.linalg.svd(A, compute_uv=False)[0]
        assert spectral_norm(A) == pytest.approx(ref, rel=1e-6)
        x = rng.standard_normal(50)
        assert spectral_norm(A) >= np.linalg.norm(A @ x) / np.linalg.norm(x) * (1 - 1e-8)


def test_spectral_norm_start_in_null_space():
    # all-ones start vector is annihilated by this matrix
    A = np.array([[1.0, -1.0]])
    assert spectral_norm(A) == pytest.approx(np.sqrt(2.0), rel=1e-9)


def test_spectral_norm_zero_matrix():
    with pytest.raises(ValueError):
        spectral_norm(np.zeros((2, 2)))
