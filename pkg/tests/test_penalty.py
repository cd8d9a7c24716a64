import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fpthresh.penalty import P_a, PenaltyParams, check_subadditive_chain, check_scaling, p_a

# subnormal t can underflow a*|t| to 0
finite = st.floats(-1e6, 1e6, allow_nan=False, allow_subnormal=False)
sharpness = st.floats(0.01, 100.0)


def test_rejects_nonpositive_a():
    for bad in (0.0, -1.0, float("nan")):
        with pytest.raises(ValueError):
            PenaltyParams(bad)


def test_rejects_nonfinite_input():
    with pytest.raises(ValueError):
        p_a(float("inf"), 1.0)
    with pytest.raises(ValueError):
        P_a([1.0, float("nan")], 1.0)


def test_scalar_examples():
    assert p_a(0.0, PenaltyParams(2.0)) == 0.0
    assert p_a(1.0, 2.0) == pytest.approx(2 / 3, abs=1e-15)
    v = p_a(1.0, 1e6)
    assert 0.999999 <= v < 1


def test_vector_examples():
    assert P_a(np.zeros(5), 3.0) == 0.0
    assert P_a([1.0, 1.0], 2.0) == pytest.approx(4 / 3, abs=1e-15)
    assert P_a([0.7, 0, 0, 0], 5.0) == p_a(0.7, 5.0)


def test_inequality_examples():
    assert check_subadditive_chain(1.0, -1.0, 1.0)
    assert check_subadditive_chain(1.0, 1.0, 1.0)
    assert check_scaling(2.0, 1.0, 1.0)
    assert check_scaling(1.0, 5.0, 3.0)
    assert p_a(5.0, 3.0) == 1.0 * p_a(5.0, 3.0)


def test_inequality_sweeps():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        a = rng.uniform(0.1, 10)
        xi, xj = rng.normal(scale=5, size=2)
        assert check_subadditive_chain(xi, xj, a)
        c, t = rng.normal(scale=3), rng.normal(scale=5)
        assert check_scaling(c, t, a)


@given(finite, sharpness)
def test_symmetric_bounded_and_below_linear(t, a):
    v = p_a(t, a)
    assert v == p_a(-t, a)
    assert 0 <= v < 1
    assert (v == 0) == (t == 0)
    assert v <= a * abs(t)


@given(st.floats(0, 1e3), st.floats(0, 1e3), sharpness)
def test_midpoint_concavity(s, t, a):
    assert p_a((s + t) / 2, a) >= (p_a(s, a) + p_a(t, a)) / 2 - 1e-12


@given(st.floats(1e-3, 1e3), st.floats(0.01, 50), st.floats(1.01, 10))
def test_monotone_in_a(t, a1, ratio):
    assert p_a(t, a1) < p_a(t, a1 * ratio)


@given(st.lists(finite, min_size=1, max_size=30), sharpness)
def test_sum_bounded_by_l0(xs, a):
    x = np.array(xs)
    assert P_a(x, a) <= np.count_nonzero(x) + 1e-12
    assert math.isclose(P_a(x, a), sum(p_a(v, a) for v in xs), rel_tol=1e-12, abs_tol=1e-12)
