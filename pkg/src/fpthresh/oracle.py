"""Brute-force verifiers that do not share code paths with the solvers.

Everything here is deliberately slow and literal: grid search for the scalar
thresholding problem, direct substitution into the cubic, optimality
conditions evaluated from their definitions, and exhaustive enumeration of
supports for tiny sensing problems.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
MAX_ENUM_N = 20
MAX_ENUM_M = 10


def _frac(y, a):
    ay = a * np.abs(y)
    return ay / (1.0 + ay)


def scalar_objective(y, x: float, lam: float, a: float):
    """``(y - x)^2 + lam * a|y| / (1 + a|y|)``."""
    y = np.asarray(y, dtype=float)
    return (y - x) ** 2 + lam * _frac(y, a)


def _golden(f, lo: float, hi: float, tol: float = 1e-13, max_iter: int = 200) -> float:
    c = hi - GOLDEN * (hi - lo)
    d = lo + GOLDEN * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if hi - lo <= tol * max(1.0, abs(lo) + abs(hi)):
            break
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - GOLDEN * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + GOLDEN * (hi - lo)
            fd = f(d)
    return c if fc < fd else d


def prox_grid_oracle(x: float, lam: float, a: float, grid_step: float = 1e-5, coarse_points: int = 4001) -> float:
    """Argmin of the scalar thresholding objective by search.

    A coarse grid over ``[-|x|-1, |x|+1]`` brackets two candidates (the best
    point overall and the best point away from the origin, since the
    objective can have a local minimum at 0 and one more on the side of
    ``x``). Each is refined on a ``grid_step`` grid and then by golden
    section. The exact origin is always a candidate.
    """
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    x = float(x)
    f = lambda y: float(scalar_objective(y, x, lam, a))  # noqa: E731
    half = abs(x) + 1.0
    coarse = np.linspace(-half, half, coarse_points)
    h = coarse[1] - coarse[0]
    vals = scalar_objective(coarse, x, lam, a)
    seeds = [coarse[int(np.argmin(vals))]]
    away = np.abs(coarse) >= 2 * h
    if np.any(away):
        seeds.append(coarse[away][int(np.argmin(vals[away]))])

    candidates = [0.0]
    for y0 in seeds:
        fine = np.arange(y0 - h, y0 + h + grid_step / 2, grid_step)
        fv = scalar_objective(fine, x, lam, a)
        yf = float(fine[int(np.argmin(fv))])
        candidates.append(yf)
        candidates.append(_golden(f, yf - grid_step, yf + grid_step))
    return min(candidates, key=f)


def cubic_residual(y: float, t: float, lam: float, a: float) -> float:
    """Residual of the stationarity cubic at ``y``.

    ``t >= 0``: ``|2y(ay+1)^2 - 2t(ay+1)^2 + lam*a|``;
    ``t < 0``:  ``|2y(1-ay)^2 - 2t(1-ay)^2 - lam*a|``.
    """
    if t >= 0:
        s = (a * y + 1.0) ** 2
        return abs(2.0 * y * s - 2.0 * t * s + lam * a)
    s = (1.0 - a * y) ** 2
    return abs(2.0 * y * s - 2.0 * t * s - lam * a)


def check_first_order(x, A, b, lam: float, a: float, tol: float) -> bool:
    """Stationarity on the support: ``2(A^T(b-Ax))_i == lam*a*sgn(x_i)/(1+a|x_i|)^2``."""
    x = np.asarray(x, dtype=float)
    A = np.asarray(A, dtype=float)
    supp = np.flatnonzero(x)
    if supp.size == 0:
        return True
    grad = 2.0 * (A.T @ (b - A @ x))[supp]
    xs = x[supp]
    rhs = lam * a * np.sign(xs) / (1.0 + a * np.abs(xs)) ** 2
    return bool(np.all(np.abs(grad - rhs) <= tol))


def check_lower_bound(x, lam: float, a: float, col_norms, tol: float = 0.0) -> bool:
    """Nonzero floor ``|x_i| >= sqrt(lam)/||a_i|| - 1/a`` of global minimizers."""
    x = np.asarray(x, dtype=float)
    col_norms = np.asarray(col_norms, dtype=float)
    supp = np.flatnonzero(x)
    floor = math.sqrt(lam) / col_norms[supp] - 1.0 / a
    return bool(np.all(np.abs(x[supp]) >= floor - tol))


def check_linf_bound(x, b, lam: float, a: float) -> bool:
    """``||x||_inf <= ||b||^2 / (a (lam - ||b||^2))``; requires ``lam > ||b||^2``."""
    b = np.asarray(b, dtype=float)
    bb = float(b @ b)
    if not lam > bb:
        raise ValueError(f"bound requires lambda > ||b||^2 = {bb!r}")
    bound = bb / (a * (lam - bb))
    return float(np.max(np.abs(x), initial=0.0)) <= bound


def lambda_bar(A, b, a: float) -> float:
    """Weight above which the zero vector is the global minimizer."""
    b = np.asarray(b, dtype=float)
    bb = float(b @ b)
    g = float(np.max(np.abs(np.asarray(A, dtype=float).T @ b)))
    return bb + (g + math.sqrt(g + 2.0 * a * bb * g)) / a


def _default_tol(b) -> float:
    return 1e-9 * max(1.0, float(np.linalg.norm(b)))


def _restricted_ls(A, b, cols):
    As = A[:, cols]
    z, *_ = np.linalg.lstsq(As, b, rcond=None)
    return z, float(np.linalg.norm(As @ z - b))


def exhaustive_l0(A, b, residual_tol: float | None = None) -> tuple[int, np.ndarray]:
    """Sparsest ``x`` with ``||Ax - b|| <= residual_tol``, by enumerating supports by size."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    if n > MAX_ENUM_N:
        raise ValueError(f"exhaustive search limited to n <= {MAX_ENUM_N}, got {n}")
    tol = _default_tol(b) if residual_tol is None else residual_tol
    if np.linalg.norm(b) <= tol:
        return 0, np.zeros(n)
    for size in range(1, min(m, n) + 1):
        for cols in itertools.combinations(range(n), size):
            z, res = _restricted_ls(A, b, list(cols))
            if res <= tol:
                x = np.zeros(n)
                x[list(cols)] = z
                return size, x
    raise ValueError("no support of size <= m reproduces b within tolerance")


@dataclass
class TinyInstanceReport:
    l0_min: int
    l0_solution: np.ndarray
    vertices: list[np.ndarray]
    r_const: float
    R_const: float
    a_star_star: float
    sigma_min: float
    sigma_min_sq: float
    lam: float
    a: float
    lambda_in_range: bool
    recovery_condition_lhs: float
    recovery_condition_holds: bool


def tiny_constants(A, b, residual_tol: float | None = None, lam: float | None = None, a: float = 2.0) -> TinyInstanceReport:
    """Vertex constants ``r``, ``R``, ``a**`` and the singular-value test on a tiny system.

    Vertices are basic solutions: full-column-rank column subsets whose
    restricted least-squares solution reproduces ``b`` and is nonzero on every
    chosen column. ``sigma_min`` is minimized over all full-column-rank
    subsets. The sufficient condition

        4 m ||A||^4 / (lam a^2) * (lam / (lam - ||b||^2))^4 < sigma_min^2

    is evaluated with the squared singular value; ``lam`` defaults to the
    midpoint of ``(||b||^2, lambda_bar)``.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    if n > MAX_ENUM_N or m > MAX_ENUM_M:
        raise ValueError(f"tiny_constants limited to n <= {MAX_ENUM_N}, m <= {MAX_ENUM_M}")
    tol = _default_tol(b) if residual_tol is None else residual_tol

    seen: dict[tuple, np.ndarray] = {}
    sigma_min = math.inf
    for size in range(1, min(m, n) + 1):
        for cols in itertools.combinations(range(n), size):
            cols = list(cols)
            sv = np.linalg.svd(A[:, cols], compute_uv=False)
            if sv[-1] <= max(m, size) * np.finfo(float).eps * sv[0]:
                continue
            sigma_min = min(sigma_min, float(sv[-1]))
            z, res = _restricted_ls(A, b, cols)
            if res <= tol and np.all(z != 0):
                x = np.zeros(n)
                x[cols] = z
                seen.setdefault(tuple(np.round(x, 12)), x)
    vertices = list(seen.values())
    if not vertices:
        raise ValueError("no basic solution reproduces b: the system is infeasible or b = 0")

    nz = np.concatenate([np.abs(v[v != 0]) for v in vertices])
    r_const, R_const = float(nz.min()), float(nz.max())
    l0_min, l0_solution = exhaustive_l0(A, b, tol)

    bb = float(b @ b)
    lbar = lambda_bar(A, b, a)
    if lam is None:
        lam = 0.5 * (bb + lbar)
    in_range = bb < lam < lbar
    norm_A = float(np.linalg.norm(A, 2))
    if lam > bb:
        lhs = 4.0 * m * norm_A**4 / (lam * a * a) * (lam / (lam - bb)) ** 4
    else:
        lhs = math.inf
    return TinyInstanceReport(
        l0_min=l0_min,
        l0_solution=l0_solution,
        vertices=vertices,
        r_const=r_const,
        R_const=R_const,
        a_star_star=l0_min / r_const,
        sigma_min=sigma_min,
        sigma_min_sq=sigma_min**2,
        lam=float(lam),
        a=a,
        lambda_in_range=in_range,
        recovery_condition_lhs=lhs,
        recovery_condition_holds=bool(in_range and lhs < sigma_min**2),
    )
