"""Iterative thresholding solvers for ``min ||Ax - b||^2 + lam * penalty(x)``.

All four methods share one loop: a gradient half-step
``z = x + mu * A.T (b - A x)`` followed by a componentwise thresholding of
``z``. They differ in the thresholding operator and in how ``lam`` is chosen:

* ``FP_SCHEME1``: fraction penalty, fixed ``lam = lambda0``.
* ``FP_SCHEME2``: fraction penalty, ``lam`` re-chosen every iteration from the
  k-th and (k+1)-th largest ``|z|``.
* ``SOFT``: l1 soft thresholding (threshold ``lam*mu/2``), fixed ``lambda0`` or,
  when only ``k`` is given, threshold ``|z|_(k+1)``.
* ``HALF``: l1/2 half thresholding with the k-sparse adaptive weight
  ``lam*mu = sqrt(96)/9 * |z|_(k+1)^(3/2)``, or fixed ``lambda0``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import spectral_norm
from .prox import _resolvent

HALF_THRESHOLD_COEF = 54.0 ** (1.0 / 3.0) / 4.0
HALF_ADAPTIVE_COEF = math.sqrt(96.0) / 9.0


class Scheme(enum.Enum):
    FP_SCHEME1 = "FP-Scheme1"
    FP_SCHEME2 = "FP-Scheme2"
    SOFT = "Soft"
    HALF = "Half"


@dataclass
class SolverConfig:
    scheme: Scheme = Scheme.FP_SCHEME2
    a: float = 2.0
    lambda0: float | None = None
    k: int | None = None
    epsilon: float = 0.01
    max_iter: int = 5000
    step_tol: float = 1e-8
    x0: np.ndarray | None = None

    def validate(self, n: int) -> None:
        if not (self.a > 0 and math.isfinite(self.a)):
            raise ValueError("a must be positive")
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.step_tol < 0:
            raise ValueError("step_tol must be nonnegative")
        if self.x0 is not None and np.shape(self.x0) != (n,):
            raise ValueError(f"x0 must have length {n}")
        if self.scheme is Scheme.FP_SCHEME1 and self.lambda0 is None:
            raise ValueError("FP-Scheme1 needs lambda0")
        if self.scheme is Scheme.FP_SCHEME2 and self.k is None:
            raise ValueError("FP-Scheme2 needs k")
        if self.scheme in (Scheme.SOFT, Scheme.HALF) and self.lambda0 is None and self.k is None:
            raise ValueError(f"{self.scheme.value} needs lambda0 or k")
        if self.lambda0 is not None and not self.lambda0 > 0:
            raise ValueError("lambda0 must be positive")
        if self.k is not None:
            # adaptive rules read |z|_(k+1)
            if not 1 <= self.k < n:
                raise ValueError(f"k must satisfy 1 <= k < n={n}")


@dataclass
class SolveResult:
    """Outcome of one solve.

    ``objective_trace[j]`` is the objective at the iterate produced by
    iteration ``j`` under that iteration's ``lam`` (so for fixed-``lam``
    schemes ``objective_trace[0]`` is ``C(x^1)``); ``initial_objective`` is
    ``C(x^0)`` under the first ``lam``. ``step_diffs[j]`` is the Euclidean
    length of that iteration's update.
    """

    x_final: np.ndarray
    objective_trace: np.ndarray
    step_diffs: np.ndarray
    lambda_trace: np.ndarray
    threshold_trace: np.ndarray
    iterations: int
    converged: bool
    fixed_point_residual: float
    mu: float
    norm_A: float
    initial_objective: float
    scheme: Scheme = Scheme.FP_SCHEME2
    warnings: list[str] = field(default_factory=list)

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.x_final)


def step_size(A, epsilon: float = 0.01) -> tuple[float, float]:
    """``mu = (1 - epsilon) / ||A||_2^2`` together with ``||A||_2``."""
    norm_A = spectral_norm(A)
    return (1.0 - epsilon) / norm_A**2, norm_A


def b_mu(x, A, b, mu: float) -> np.ndarray:
    """Gradient half-step ``x + mu * A.T (b - A x)``."""
    A = np.asarray(A, dtype=float)
    x = np.asarray(x, dtype=float)
    b = np.asarray(b, dtype=float)
    if A.shape != (b.shape[0], x.shape[0]):
        raise ValueError(f"dimension mismatch: A {A.shape}, x {x.shape}, b {b.shape}")
    return x + mu * (A.T @ (b - A @ x))


def fp_objective(x, A, b, lam: float, a: float) -> float:
    r = np.asarray(A) @ x - b
    ax = a * np.abs(x)
    return float(r @ r + lam * np.sum(ax / (1.0 + ax)))


def l1_objective(x, A, b, lam: float) -> float:
    r = np.asarray(A) @ x - b
    return float(r @ r + lam * np.sum(np.abs(x)))


def half_objective(x, A, b, lam: float) -> float:
    r = np.asarray(A) @ x - b
    return float(r @ r + lam * np.sum(np.sqrt(np.abs(x))))


# --- thresholding kernels -------------------------------------------------
# Each takes z and the effective weight lam*mu and returns the new iterate.


def fp_threshold(z: np.ndarray, lam_eff: float, a: float, t: float) -> np.ndarray:
    out = np.zeros_like(z)
    keep = np.abs(z) > t
    if np.any(keep):
        zk = z[keep]
        out[keep] = np.copysign(_resolvent(np.abs(zk), lam_eff, a), zk)
    return out


def soft_threshold(z: np.ndarray, t: float) -> np.ndarray:
    return np.sign(z) * np.maximum(np.abs(z) - t, 0.0)


def half_threshold_value(lam_eff: float) -> float:
    return HALF_THRESHOLD_COEF * lam_eff ** (2.0 / 3.0)


def half_threshold(z: np.ndarray, lam_eff: float) -> np.ndarray:
    """Minimizer of ``(y - z)^2 + lam_eff * |y|^(1/2)``, componentwise."""
    out = np.zeros_like(z)
    t = half_threshold_value(lam_eff)
    keep = np.abs(z) > t
    if np.any(keep):
        zk = z[keep]
        arg = np.minimum((lam_eff / 8.0) * (np.abs(zk) / 3.0) ** -1.5, 1.0)
        phi = np.arccos(arg)
        out[keep] = (2.0 / 3.0) * zk * (1.0 + np.cos(2.0 * np.pi / 3.0 - 2.0 * phi / 3.0))
    return out


def _kth_largest(z_abs: np.ndarray, k: int) -> tuple[float, float]:
    """``(|z|_(k), |z|_(k+1))`` with 1-based ranks; ties fall to the lower index."""
    order = np.argsort(-z_abs, kind="stable")
    return float(z_abs[order[k - 1]]), float(z_abs[order[k]])


def adaptive_fp_lambda(z, k: int, a: float, mu: float) -> tuple[float, float]:
    """Scheme-2 weight and threshold from the k-th and (k+1)-th largest ``|z|``.

    ``lam1 = 2|z|_(k+1) / (a mu)`` is used with threshold ``lam mu a / 2``
    when ``lam1 <= 1/(a^2 mu)``; otherwise ``lam2 = (2a|z|_(k) + 1)^2 / (4 a^2 mu)``
    with threshold ``sqrt(lam mu) - 1/(2a)``.
    """
    zk, zk1 = _kth_largest(np.abs(np.asarray(z, dtype=float)), k)
    lam1 = 2.0 * zk1 / (a * mu)
    if lam1 <= 1.0 / (a * a * mu):
        return lam1, lam1 * mu * a / 2.0
    lam2 = (2.0 * a * zk + 1.0) ** 2 / (4.0 * a * a * mu)
    return lam2, math.sqrt(lam2 * mu) - 1.0 / (2.0 * a)


class _Stepper:
    """Chooses ``(lam, threshold)`` from ``z`` and applies the operator."""

    def __init__(self, cfg: SolverConfig, mu: float):
        self.cfg = cfg
        self.mu = mu

    def __call__(self, z: np.ndarray) -> tuple[np.ndarray, float, float]:
        cfg, mu, a = self.cfg, self.mu, self.cfg.a
        scheme = cfg.scheme
        if scheme is Scheme.FP_SCHEME1:
            lam = cfg.lambda0
            lam_eff = lam * mu
            if lam <= 1.0 / (a * a * mu):
                t = lam_eff * a / 2.0
            else:
                t = math.sqrt(lam_eff) - 1.0 / (2.0 * a)
            return fp_threshold(z, lam_eff, a, t), lam, t
        if scheme is Scheme.FP_SCHEME2:
            lam, t = adaptive_fp_lambda(z, cfg.k, a, mu)
            return fp_threshold(z, lam * mu, a, t), lam, t
        if scheme is Scheme.SOFT:
            if cfg.lambda0 is not None:
                lam = cfg.lambda0
            else:
                lam = 2.0 * _kth_largest(np.abs(z), cfg.k)[1] / mu
            t = lam * mu / 2.0
            return soft_threshold(z, t), lam, t
        if cfg.lambda0 is not None:
            lam = cfg.lambda0
        else:
            lam = HALF_ADAPTIVE_COEF * _kth_largest(np.abs(z), cfg.k)[1] ** 1.5 / mu
        return half_threshold(z, lam * mu), lam, half_threshold_value(lam * mu)


def solve(A, b, cfg: SolverConfig, mu: float | None = None, norm_A: float | None = None) -> SolveResult:
    """Run the thresholding iteration selected by ``cfg.scheme``.

    ``mu`` defaults to ``(1 - cfg.epsilon) / ||A||_2^2``. Iteration stops when
    ``||x_new - x||_2 / max(1, ||x||_2) <= cfg.step_tol`` or after
    ``cfg.max_iter`` updates.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    if b.shape != (m,):
        raise ValueError(f"b must have length {m}")
    cfg.validate(n)
    if mu is None:
        if norm_A is None:
            norm_A = spectral_norm(A)
        mu = (1.0 - cfg.epsilon) / norm_A**2
    elif norm_A is None:
        norm_A = spectral_norm(A)

    warnings: list[str] = []
    if cfg.scheme is Scheme.FP_SCHEME1:
        from .oracle import lambda_bar

        bb = float(b @ b)
        if bb > 0:
            lo, hi = bb, lambda_bar(A, b, cfg.a)
            if not lo <= cfg.lambda0 <= hi:
                warnings.append(f"lambda0={cfg.lambda0:.6g} outside recommended [{lo:.6g}, {hi:.6g}]")

    step = _Stepper(cfg, mu)
    x = np.zeros(n) if cfg.x0 is None else np.array(cfg.x0, dtype=float)
    Ax = A @ x
    objs, diffs, lams, ts = [], [], [], []
    initial_objective = None
    converged = False
    for _ in range(cfg.max_iter):
        z = x + mu * (A.T @ (b - Ax))
        x_new, lam, t = step(z)
        if initial_objective is None:
            r0 = Ax - b
            initial_objective = float(r0 @ r0) + _penalty(cfg, x, lam)
        Ax = A @ x_new
        r = Ax - b
        objs.append(float(r @ r) + _penalty(cfg, x_new, lam))
        diff = float(np.linalg.norm(x_new - x))
        diffs.append(diff)
        lams.append(lam)
        ts.append(t)
        scale = max(1.0, float(np.linalg.norm(x)))
        x = x_new
        if diff / scale <= cfg.step_tol:
            converged = True
            break

    z = x + mu * (A.T @ (b - Ax))
    residual = float(np.max(np.abs(x - step(z)[0]), initial=0.0))
    return SolveResult(
        x_final=x,
        objective_trace=np.array(objs),
        step_diffs=np.array(diffs),
        lambda_trace=np.array(lams),
        threshold_trace=np.array(ts),
        iterations=len(diffs),
        converged=converged,
        fixed_point_residual=residual,
        mu=mu,
        norm_A=float(norm_A),
        initial_objective=float(initial_objective),
        scheme=cfg.scheme,
        warnings=warnings,
    )


def _penalty(cfg: SolverConfig, x: np.ndarray, lam: float) -> float:
    ax = np.abs(x)
    if cfg.scheme in (Scheme.FP_SCHEME1, Scheme.FP_SCHEME2):
        ax = cfg.a * ax
        return lam * float(np.sum(ax / (1.0 + ax)))
    if cfg.scheme is Scheme.SOFT:
        return lam * float(np.sum(ax))
    return lam * float(np.sum(np.sqrt(ax)))


def _with_scheme(cfg: SolverConfig, scheme: Scheme) -> SolverConfig:
    if cfg.scheme is not scheme:
        raise ValueError(f"config is for {cfg.scheme.value}, expected {scheme.value}")
    return cfg


def fp_iterate_scheme1(problem, cfg: SolverConfig, **kw) -> SolveResult:
    return solve(problem.A, problem.b, _with_scheme(cfg, Scheme.FP_SCHEME1), **kw)


def fp_iterate_scheme2(problem, cfg: SolverConfig, **kw) -> SolveResult:
    return solve(problem.A, problem.b, _with_scheme(cfg, Scheme.FP_SCHEME2), **kw)


def soft_iterate(problem, cfg: SolverConfig, **kw) -> SolveResult:
    return solve(problem.A, problem.b, _with_scheme(cfg, Scheme.SOFT), **kw)


def half_iterate(problem, cfg: SolverConfig, **kw) -> SolveResult:
    return solve(problem.A, problem.b, _with_scheme(cfg, Scheme.HALF), **kw)
