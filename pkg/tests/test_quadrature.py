import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from proca_lifshitz.quadrature import (GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES, ConvergenceError, integrate_batch,
                                       integrate_on_partition, matsubara_sum, tail_integral)


def test_rule_integrates_polynomials():
    # Kronrod 21 is exact to degree 31, Gauss 10 to degree 19
    for p in range(0, 32, 2):
        assert KRONROD_WEIGHTS @ NODES**p == pytest.approx(2.0 / (p + 1), rel=1e-14)
    for p in range(0, 20, 2):
        assert GAUSS_WEIGHTS @ NODES**p == pytest.approx(2.0 / (p + 1), rel=1e-14)


@given(st.floats(0.0, 30.0))
def test_tail_integral_exponential(a):
    value, _ = tail_integral(lambda z: np.exp(-2.0 * z), a, rtol=1e-13)
    assert value == pytest.approx(0.5 * math.exp(-2.0 * a), rel=1e-12)


def test_tail_integral_with_log_kernel():
    # int_0^inf z ln(1 - e^{-2z}) dz = -zeta(3)/4
    value, _ = tail_integral(lambda z: z * np.log(-np.expm1(-2.0 * z)), 0.0, rtol=1e-13)
    assert value == pytest.approx(-1.2020569031595942 / 4, rel=1e-12)


def test_batch_owners_are_independent():
    scales = np.array([0.5, 1.0, 3.0])

    def f(x, owner):
        return np.cos(scales[owner] * x)

    res = integrate_batch(f, 3, breaks=[0.0, 1.0, 2.0], rtol=1e-13)
    assert res.values[0] == pytest.approx(np.sin(2 * scales) / scales, rel=1e-12)
    again = integrate_on_partition(f, res.partition)
    assert np.array_equal(again, res.values)


def test_batch_budget_exhaustion_raises():
    with pytest.raises(ConvergenceError) as err:
        integrate_batch(lambda x, o: np.sin(1e4 * x), 1, breaks=[0.0, 1.0], rtol=1e-14, max_intervals=8)
    assert err.value.diagnostics


@settings(max_examples=50)
@given(st.floats(0.05, 0.9), st.integers(1, 64))
def test_matsubara_sum_chunking_invariant(q, chunk):
    def term(n):
        return q ** n.astype(float)

    ref, used_ref = matsubara_sum(term, rel_tol=1e-14)
    got, used = matsubara_sum(term, rel_tol=1e-14, first_chunk=chunk, max_chunk=chunk)
    assert got == ref and used == used_ref
    assert got == pytest.approx(1.0 / (1.0 - q), rel=1e-12)


def test_matsubara_sum_stops_after_three_small_terms():
    calls = []

    def term(n):
        calls.extend(n.tolist())
        return np.where(n < 2, 1.0, 0.0)

    total, used = matsubara_sum(term, first_chunk=1, max_chunk=1)
    assert total == 2.0 and used == 5


def test_matsubara_sum_budget():
    with pytest.raises(ConvergenceError):
        matsubara_sum(lambda n: 1.0 / (1.0 + n), max_terms=100)
