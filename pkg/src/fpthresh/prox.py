"""Closed-form thresholding operator for the fraction penalty.

For an effective weight ``lam`` the scalar problem

    min_y (y - x)^2 + lam * p_a(|y|)

is solved by zero inside a dead zone ``|x| <= t`` and by the largest root of
the cubic ``2y(ay+1)^2 - 2x(ay+1)^2 + lam*a = 0`` outside it. The root has a
trigonometric closed form; it is evaluated here in the algebraically
equivalent shape

    g(x) = x - 4(1 + a|x|)/(3a) * sin^2(arcsin(sqrt(w/2)) / 3),
    w    = 27 lam a^2 / (4 (1 + a|x|)^3),

which avoids the cancellation of ``arccos`` near -1 and of the final
``(...) - 1`` subtraction.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class Regime(enum.Enum):
    SMALL_LAMBDA = "small"  # lam <= 1/a^2, threshold t2
    LARGE_LAMBDA = "large"  # lam > 1/a^2, threshold t3


@dataclass(frozen=True)
class ThresholdTriple:
    t1: float
    t2: float
    t3: float
    regime: Regime
    t: float


@dataclass(frozen=True)
class ProxConfig:
    """Weight ``lam``, step ``mu`` and sharpness ``a`` of one thresholding step.

    Inside the iteration the scalar operator sees the product ``lam * mu``.
    """

    lam: float
    mu: float
    a: float

    def __post_init__(self) -> None:
        for name in ("lam", "mu", "a"):
            v = getattr(self, name)
            if not np.isfinite(v) or v <= 0:
                raise ValueError(f"{name} must be positive and finite, got {v!r}")

    @property
    def lam_eff(self) -> float:
        return self.lam * self.mu


def _check_positive(lam: float, a: float) -> None:
    if not (np.isfinite(lam) and lam > 0):
        raise ValueError(f"lambda must be positive, got {lam!r}")
    if not (np.isfinite(a) and a > 0):
        raise ValueError(f"a must be positive, got {a!r}")


def thresholds(lam: float, a: float) -> ThresholdTriple:
    _check_positive(lam, a)
    t1 = (np.cbrt(27.0 * lam * a * a / 8.0) - 1.0) / a
    t2 = lam * a / 2.0
    t3 = np.sqrt(lam) - 1.0 / (2.0 * a)
    if lam <= 1.0 / (a * a):
        return ThresholdTriple(float(t1), float(t2), float(t3), Regime.SMALL_LAMBDA, float(t2))
    return ThresholdTriple(float(t1), float(t2), float(t3), Regime.LARGE_LAMBDA, float(t3))


def active_threshold(lam: float, a: float) -> float:
    if lam <= 1.0 / (a * a):
        return lam * a / 2.0
    return np.sqrt(lam) - 1.0 / (2.0 * a)


def _resolvent(x_abs, lam: float, a: float):
    """Unsigned resolvent for ``x_abs > t1``; no domain check."""
    s = 1.0 + a * x_abs
    w = 27.0 * lam * a * a / (4.0 * s**3)
    # w/2 can exceed 1 by rounding at x_abs == t1
    ang = np.arcsin(np.sqrt(np.minimum(w / 2.0, 1.0))) / 3.0
    return x_abs - (4.0 * s / (3.0 * a)) * np.sin(ang) ** 2


def g_lambda(t, lam: float, a: float):
    """Largest cubic root (smallest for ``t < 0``) giving the nonzero branch.

    Only defined for ``|t| > t1``; below that the cubic loses its three real
    roots and a :class:`ValueError` is raised. ``t1`` is negative when
    ``lam * a^2 < 8/27``; ``g(0)`` is then 0 by the sign convention.
    """
    _check_positive(lam, a)
    t = np.asarray(t, dtype=float)
    t1 = thresholds(lam, a).t1
    if np.any(np.abs(t) <= t1):
        raise ValueError(f"g_lambda is only defined for |t| > t1* = {t1!r}")
    out = np.sign(t) * _resolvent(np.abs(t), lam, a)
    return float(out) if out.ndim == 0 else out


def prox_scalar(x: float, lam: float, a: float) -> float:
    """Global minimizer of ``(y - x)^2 + lam * p_a(|y|)``; ``|x| == t`` maps to 0."""
    _check_positive(lam, a)
    x = float(x)
    t = active_threshold(lam, a)
    if abs(x) <= t:
        return 0.0
    return float(np.copysign(_resolvent(abs(x), lam, a), x))


def prox_vector(z, lam: float, a: float) -> np.ndarray:
    """Componentwise :func:`prox_scalar`; thresholded entries are exact zeros."""
    _check_positive(lam, a)
    z = np.asarray(z, dtype=float)
    t = active_threshold(lam, a)
    out = np.zeros_like(z)
    keep = np.abs(z) > t
    if np.any(keep):
        zk = z[keep]
        out[keep] = np.copysign(_resolvent(np.abs(zk), lam, a), zk)
    return out


def prox(z, cfg: ProxConfig) -> np.ndarray:
    """Thresholding step ``G_{lam*mu}`` for a full :class:`ProxConfig`."""
    return prox_vector(z, cfg.lam_eff, cfg.a)
