"""Seeded Gaussian sensing problems.

Randomness comes from numpy's ``PCG64`` bit generator with ziggurat normals
(``Generator.standard_normal``). A master seed is expanded with
``SeedSequence(seed).spawn(3)`` into three independent child streams, used in
this fixed order: sensing matrix, sparse signal, measurement noise. Changing
``sigma`` or ``k`` therefore never changes ``A``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

PRNG_NAME = f"numpy-{np.__version__}/PCG64/SeedSequence.spawn(3)/ziggurat-normal"

_MATRIX, _SIGNAL, _NOISE = range(3)


def _stream(seed: int, which: int) -> np.random.Generator:
    child = np.random.SeedSequence(int(seed)).spawn(3)[which]
    return np.random.Generator(np.random.PCG64(child))


@dataclass
class SensingProblem:
    A: np.ndarray
    b: np.ndarray
    x_true: np.ndarray | None = None
    sigma: float = 0.0
    seed: int = 0
    k: int = field(default=0)

    def __post_init__(self) -> None:
        self.A = np.asarray(self.A, dtype=float)
        self.b = np.asarray(self.b, dtype=float)
        if self.A.ndim != 2 or self.b.shape != (self.A.shape[0],):
            raise ValueError(f"inconsistent shapes: A {self.A.shape}, b {self.b.shape}")
        if self.x_true is not None:
            self.x_true = np.asarray(self.x_true, dtype=float)
            if self.x_true.shape != (self.A.shape[1],):
                raise ValueError("x_true length must equal the number of columns of A")
            if not self.k:
                self.k = int(np.count_nonzero(self.x_true))

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]


def gen_gaussian_matrix(m: int, n: int, seed: int) -> np.ndarray:
    if m < 1 or n < 1:
        raise ValueError("matrix dimensions must be positive")
    return _stream(seed, _MATRIX).standard_normal((m, n))


def gen_sparse_signal(n: int, k: int, seed: int) -> np.ndarray:
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    rng = _stream(seed, _SIGNAL)
    support = rng.choice(n, size=k, replace=False)
    values = rng.standard_normal(k)
    while np.any(values == 0.0):
        zero = values == 0.0
        values[zero] = rng.standard_normal(int(zero.sum()))
    x = np.zeros(n)
    x[support] = values
    return x


def measure(A, x_true, sigma: float, seed: int) -> np.ndarray:
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    b = np.asarray(A, dtype=float) @ np.asarray(x_true, dtype=float)
    if sigma > 0:
        b = b + sigma * _stream(seed, _NOISE).standard_normal(b.shape[0])
    return b


def make_problem(m: int, n: int, k: int, sigma: float, seed: int, A=None) -> SensingProblem:
    """Full problem from ``(m, n, k, sigma, seed)``; pass ``A`` to reuse a fixed matrix."""
    if A is None:
        A = gen_gaussian_matrix(m, n, seed)
    x = gen_sparse_signal(n, k, seed)
    return SensingProblem(A=A, b=measure(A, x, sigma, seed), x_true=x, sigma=sigma, seed=seed, k=k)


def _fmt(values) -> str:
    return " ".join(f"{v:.17g}" for v in values)


def save_problem(problem: SensingProblem, path) -> None:
    """Plain-text archive: header ``m n k sigma seed``, rows of A, then b, then x_true."""
    lines = [f"{problem.m} {problem.n} {problem.k} {problem.sigma:.17g} {problem.seed}"]
    lines.extend(_fmt(row) for row in problem.A)
    lines.append(_fmt(problem.b))
    if problem.x_true is not None:
        lines.append(_fmt(problem.x_true))
    Path(path).write_text("\n".join(lines) + "\n")


def load_problem(path) -> SensingProblem:
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip()]
    head = lines[0].split()
    if len(head) != 5:
        raise ValueError("header must be 'm n k sigma seed'")
    m, n, k = int(head[0]), int(head[1]), int(head[2])
    sigma, seed = float(head[3]), int(head[4])
    if len(lines) < m + 2:
        raise ValueError(f"expected {m} matrix rows and a measurement line")
    A = np.array([[float(v) for v in ln.split()] for ln in lines[1 : m + 1]])
    if A.shape != (m, n):
        raise ValueError(f"matrix block has shape {A.shape}, header says {(m, n)}")
    b = np.array([float(v) for v in lines[m + 1].split()])
    x_true = None
    if len(lines) > m + 2:
        x_true = np.array([float(v) for v in lines[m + 2].split()])
    return SensingProblem(A=A, b=b, x_true=x_true, sigma=sigma, seed=seed, k=k)
