import numpy as np
import pytest

from fpthresh.instances import (
    SensingProblem,
    gen_gaussian_matrix,
    gen_sparse_signal,
    load_problem,
    make_problem,
    measure,
    save_problem,
)


def test_matrix_deterministic():
    np.testing.assert_array_equal(gen_gaussian_matrix(2, 3, 42), gen_gaussian_matrix(2, 3, 42))
    assert not np.array_equal(gen_gaussian_matrix(2, 3, 42), gen_gaussian_matrix(2, 3, 43))


def test_matrix_moments():
    A = gen_gaussian_matrix(128, 512, 7)
    assert abs(A.mean()) <= 4 / np.sqrt(A.size)
    assert abs(A.std() - 1) < 0.02


def test_matrix_degenerate_and_invalid():
    A = gen_gaussian_matrix(1, 1, 0)
    assert A.shape == (1, 1) and np.isfinite(A[0, 0])
    with pytest.raises(ValueError):
        gen_gaussian_matrix(0, 3, 0)


@pytest.mark.parametrize("seed", [0, 1, 99])
def test_signal_sparsity(seed):
    x = gen_sparse_signal(512, 100, seed)
    assert np.count_nonzero(x) == 100
    np.testing.assert_array_equal(x, gen_sparse_signal(512, 100, seed))


def test_signal_dense_boundary():
    assert np.count_nonzero(gen_sparse_signal(5, 5, 3)) == 5


def test_signal_invalid_k():
    with pytest.raises(ValueError):
        gen_sparse_signal(5, 6, 0)
    with pytest.raises(ValueError):
        gen_sparse_signal(5, 0, 0)


def test_measure_exact_and_noise():
    A = gen_gaussian_matrix(20, 30, 1)
    x = gen_sparse_signal(30, 4, 1)
    np.testing.assert_array_equal(measure(A, x, 0.0, 1), A @ x)
    noise = measure(np.zeros((20000, 30)), x, 1.0, 5)
    assert abs(noise.std() - 1) < 0.03
    np.testing.assert_array_equal(noise, measure(np.zeros((20000, 30)), x, 1.0, 5))
    with pytest.raises(ValueError):
        measure(A, x, -1.0, 1)


def test_streams_independent_of_sigma_and_k():
    p0 = make_problem(16, 40, 5, 0.0, 11)
    p1 = make_problem(16, 40, 5, 0.3, 11)
    p2 = make_problem(16, 40, 9, 0.0, 11)
    np.testing.assert_array_equal(p0.A, p1.A)
    np.testing.assert_array_equal(p0.x_true, p1.x_true)
    np.testing.assert_array_equal(p0.A, p2.A)
    assert not np.array_equal(p0.b, p1.b)


def test_leading_rows_shared_across_m():
    small = gen_gaussian_matrix(10, 40, 3)
    big = gen_gaussian_matrix(25, 40, 3)
    np.testing.assert_array_equal(small, big[:10])


def test_problem_roundtrip(tmp_path):
    p = make_problem(7, 12, 3, 0.1, 2**63 + 5)
    path = tmp_path / "p.txt"
    save_problem(p, path)
    head = path.read_text().splitlines()[0].split()
    assert head[:3] == ["7", "12", "3"]
    q = load_problem(path)
    np.testing.assert_array_equal(q.A, p.A)
    np.testing.assert_array_equal(q.b, p.b)
    np.testing.assert_array_equal(q.x_true, p.x_true)
    assert (q.m, q.n, q.k, q.sigma, q.seed) == (7, 12, 3, 0.1, p.seed)


def test_load_without_truth(tmp_path):
    path = tmp_path / "p.txt"
    path.write_text("2 2 0 0 0\n1 0\n0 1\n0 0\n")
    q = load_problem(path)
    assert q.x_true is None and not np.any(q.b)


def test_load_rejects_bad_shape(tmp_path):
    path = tmp_path / "p.txt"
    path.write_text("2 3 1 0 0\n1 0\n0 1\n0 0\n")
    with pytest.raises(ValueError):
        load_problem(path)


def test_problem_properties():
    p = SensingProblem(np.ones((3, 5)), np.zeros(3))
    assert (p.m, p.n) == (3, 5)
