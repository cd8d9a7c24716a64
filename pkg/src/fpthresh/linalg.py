"""Dense kernels used by the gradient step and step-size selection."""

from __future__ import annotations

import numpy as np


class SpectralNormError(RuntimeError):
    """Power iteration did not reach the requested tolerance."""


def as_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix entries must be finite")
    return A


def matvec(A, x) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    x = np.asarray(x, dtype=float)
    if A.ndim != 2 or x.shape != (A.shape[1],):
        raise ValueError(f"dimension mismatch: A is {A.shape}, x is {x.shape}")
    return A @ x


def matvec_t(A, y) -> np.ndarray:
    """``A.T @ y``."""
    A = np.asarray(A, dtype=float)
    y = np.asarray(y, dtype=float)
    if A.ndim != 2 or y.shape != (A.shape[0],):
        raise ValueError(f"dimension mismatch: A is {A.shape}, y is {y.shape}")
    return A.T @ y


def column_norms(A) -> np.ndarray:
    return np.sqrt(np.sum(np.asarray(A, dtype=float) ** 2, axis=0))


def spectral_norm(A, tol: float = 1e-8, max_iter: int = 10000) -> float:
    """Largest singular value of ``A`` by power iteration on ``A.T A``.

    The start vector is the normalized all-ones vector so results are
    reproducible. Raises :class:`SpectralNormError` if the Rayleigh quotient
    has not settled to relative ``tol`` within ``max_iter`` steps.
    """
    A = as_matrix(A)
    n = A.shape[1]
    v = np.full(n, 1.0 / np.sqrt(n))
    sigma2 = 0.0
    for _ in range(max_iter):
        w = A.T @ (A @ v)
        norm_w = np.linalg.norm(w)
        if norm_w == 0.0:
            # start vector lies in the null space; perturb deterministically
            if not np.any(A):
                raise ValueError("spectral norm of the zero matrix is undefined")
            v = np.cos(np.arange(n, dtype=float))
            v /= np.linalg.norm(v)
            continue
        v_new = w / norm_w
        # ||A v_new||^2 is the Rayleigh quotient of A^T A at v_new
        est = float(np.dot(A @ v_new, A @ v_new))
        if sigma2 > 0 and abs(est - sigma2) <= tol * est:
            return float(np.sqrt(est))
        sigma2 = est
        v = v_new
    raise SpectralNormError(f"power iteration did not converge in {max_iter} iterations")
