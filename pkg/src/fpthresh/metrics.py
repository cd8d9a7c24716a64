"""Recovery quality measures."""

from __future__ import annotations

from typing import Iterable

import numpy as np

DEFAULT_SUCCESS_THRESHOLD = 1e-5


class SupportSet(tuple):
    """Sorted, duplicate-free tuple of nonnegative indices."""

    def __new__(cls, indices: Iterable[int] = (), n: int | None = None):
        idx = sorted({int(i) for i in indices})
        if idx and idx[0] < 0:
            raise ValueError("support indices must be nonnegative")
        if n is not None and idx and idx[-1] >= n:
            raise ValueError(f"support index {idx[-1]} out of range for n={n}")
        return super().__new__(cls, idx)


def support_of(x, eps: float = 0.0) -> SupportSet:
    """Indices with ``|x_i| > eps``. Solver output needs no epsilon: zeros are exact."""
    x = np.asarray(x, dtype=float)
    return SupportSet(np.flatnonzero(np.abs(x) > eps).tolist(), n=x.shape[0])


def rel_sq_error(x_hat, x_true) -> float:
    x_hat = np.asarray(x_hat, dtype=float)
    x_true = np.asarray(x_true, dtype=float)
    denom = float(x_true @ x_true)
    if denom == 0.0:
        raise ValueError("relative error is undefined for a zero ground truth")
    d = x_hat - x_true
    return float(d @ d) / denom


def support_distance(s_hat: Iterable[int], s: Iterable[int]) -> float:
    """``(max(|S_hat|, |S|) - |S_hat & S|) / max(|S_hat|, |S|)``."""
    s_hat, s = set(s_hat), set(s)
    big = max(len(s_hat), len(s))
    if big == 0:
        raise ValueError("support distance of two empty sets is undefined")
    return (big - len(s_hat & s)) / big


def is_success(x_hat, x_true, threshold: float = DEFAULT_SUCCESS_THRESHOLD) -> bool:
    return rel_sq_error(x_hat, x_true) <= threshold
