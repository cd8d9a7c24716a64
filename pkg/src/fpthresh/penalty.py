"""Fraction-function penalty ``p_a(t) = a|t| / (1 + a|t|)`` and its vector sum."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

INEQ_TOL = 1e-12


@dataclass(frozen=True)
class PenaltyParams:
    """Sharpness of the fraction penalty; larger ``a`` approaches the l0 count."""

    a: float

    def __post_init__(self) -> None:
        if not np.isfinite(self.a) or self.a <= 0:
            raise ValueError(f"penalty sharpness a must be a positive finite number, got {self.a!r}")


def _as_params(params: PenaltyParams | float) -> PenaltyParams:
    if isinstance(params, PenaltyParams):
        return params
    return PenaltyParams(float(params))


def _finite(value, name: str = "t"):
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    return arr


def p_a(t, params: PenaltyParams | float):
    """Scalar (or elementwise) fraction penalty. Returns a value in ``[0, 1)``."""
    a = _as_params(params).a
    at = a * np.abs(_finite(t))
    out = at / (1.0 + at)
    return float(out) if out.ndim == 0 else out


def P_a(x, params: PenaltyParams | float) -> float:
    """Sum of ``p_a`` over the entries of ``x``; bounded by ``||x||_0``."""
    a = _as_params(params).a
    ax = a * np.abs(_finite(x, "x"))
    return float(np.sum(ax / (1.0 + ax)))


def check_subadditive_chain(xi: float, xj: float, params: PenaltyParams | float) -> bool:
    """Subadditivity/concavity chain::

        p(|xi + xj|) <= p(|xi| + |xj|) <= p(|xi|) + p(|xj|) <= 2 p((|xi| + |xj|) / 2)
    """
    params = _as_params(params)
    ai, aj = abs(float(_finite(xi))), abs(float(_finite(xj)))
    chain = [
        p_a(abs(xi + xj), params),
        p_a(ai + aj, params),
        p_a(ai, params) + p_a(aj, params),
        2.0 * p_a(0.5 * (ai + aj), params),
    ]
    return all(lo <= hi + INEQ_TOL for lo, hi in zip(chain, chain[1:]))


def check_scaling(c: float, t: float, params: PenaltyParams | float) -> bool:
    """Lack of homogeneity: ``p(|ct|) <= |c| p(|t|)`` for ``|c| > 1``, reversed otherwise."""
    params = _as_params(params)
    c_abs = abs(float(_finite(c, "c")))
    t_abs = abs(float(_finite(t)))
    lhs = p_a(c_abs * t_abs, params)
    rhs = c_abs * p_a(t_abs, params)
    if c_abs > 1:
        return lhs <= rhs + INEQ_TOL
    return lhs >= rhs - INEQ_TOL
