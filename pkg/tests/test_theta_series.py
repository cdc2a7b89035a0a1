import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ghgcs.errors import DomainError, ParameterError
from ghgcs.special_functions import HyperParams
from ghgcs.theta_series import (
    FormalSeries,
    SpectrumFunction,
    dilation_check,
    func_of_theta_apply,
    hypergeometric_ode_residual,
    series_from_pfq,
    stirling_expansion_check,
    theta_apply,
    theta_recurrence_check,
)

LN2 = math.log(2.0)

# integer coefficients keep the algebraic laws below exact in floating point
coeff_lists = st.lists(st.integers(-1000, 1000).map(float), min_size=1, max_size=25)


def test_series_from_pfq_examples():
    np.testing.assert_allclose(series_from_pfq(HyperParams(), 3).coeffs, [1, 1, 1 / 2, 1 / 6], rtol=1e-15)
    np.testing.assert_allclose(series_from_pfq(HyperParams((1.0,), (2.0,)), 2).coeffs, [1, 1 / 2, 1 / 6], rtol=1e-15)
    np.testing.assert_allclose(series_from_pfq(HyperParams((1.0,), ()), 2).coeffs, [1, 1, 1], rtol=1e-15)
    with pytest.raises(ParameterError):
        series_from_pfq(HyperParams(), 1001)


def test_theta_apply_examples():
    s = FormalSeries.from_list([1.0, 1.0, 1.0])
    assert list(theta_apply(s, 1).coeffs) == [0, 1, 2]
    assert theta_apply(s, 0) == s
    assert list(theta_apply(FormalSeries.from_list([1, 1, 0.5]), 2).coeffs) == [0, 1, 2]


def test_func_of_theta_examples():
    s = FormalSeries.from_list([1.0, 1.0, 1.0])
    assert list(func_of_theta_apply(lambda n: n, s).coeffs) == [0, 1, 2]
    assert list(func_of_theta_apply(lambda n: math.exp(-LN2 * n), s).coeffs) == pytest.approx([1, 0.5, 0.25], rel=1e-15)
    assert func_of_theta_apply(lambda n: 1.0, s) == s


def test_func_of_theta_rejects_non_finite():
    s = FormalSeries.from_list([1, 1, 1])
    with pytest.raises(DomainError):
        func_of_theta_apply(SpectrumFunction(lambda n: math.inf if n == 2 else 1.0, "inf"), s)
    with pytest.raises(DomainError):
        func_of_theta_apply(SpectrumFunction(lambda n: 1.0 / (n - 1), "pole"), s)


def test_dilation_examples():
    exp30 = series_from_pfq(HyperParams(), 30)
    assert dilation_check(exp30, LN2, 0.5) < 1e-12
    assert dilation_check(exp30, 0.0, 0.7) == 0.0
    kummer40 = series_from_pfq(HyperParams((1.0,), (2.0,)), 40)
    assert dilation_check(kummer40, -LN2, 1.0) < 1e-12


def test_dilation_outside_reliable_region():
    with pytest.raises(DomainError):
        dilation_check(series_from_pfq(HyperParams(), 10), LN2, 5.0)


def test_stirling_expansion_examples():
    x2 = FormalSeries.from_list([0, 0, 1.0])
    assert stirling_expansion_check(1, x2, 2.0) <= 1e-12
    assert stirling_expansion_check(0, FormalSeries.from_list([3, -1, 2.5]), 0.7) == 0.0
    assert stirling_expansion_check(3, FormalSeries.from_list([0, 1, 0, 1.0]), 1.5) < 1e-10
    with pytest.raises(DomainError):
        stirling_expansion_check(16, x2, 1.0)


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=8), st.integers(0, 10),
       st.sampled_from([0.25, 0.5, 1.0, 1.5, -0.5]))
def test_stirling_expansion_exact_on_integer_polynomials(coeffs, n, x0):
    poly = FormalSeries.from_list(np.array(coeffs, dtype=float))
    scale = max(1.0, float(np.sum(np.abs(theta_apply(poly, n).coeffs) * abs(x0) ** np.arange(len(coeffs)))))
    assert stirling_expansion_check(n, poly, x0) <= 1e-13 * scale


def test_recurrence_examples():
    assert theta_recurrence_check(HyperParams(), 20) < 1e-14
    assert theta_recurrence_check(HyperParams((1.0,), (2.5,)), 30) < 1e-12
    assert theta_recurrence_check(HyperParams((1.2, 0.7), (3.1,)), 30) < 1e-12


def test_ode_examples():
    assert hypergeometric_ode_residual(HyperParams(), 25) < 1e-14
    assert hypergeometric_ode_residual(HyperParams((1.0,), (2.0,)), 30) < 1e-12
    assert hypergeometric_ode_residual(HyperParams((0.5, 1.5), (2.2,)), 30) < 1e-12


def test_ode_upper_factor_before_shift_does_not_hold():
    # the other operator ordering leaves an O(1) residual whenever p >= 1
    assert hypergeometric_ode_residual(HyperParams((1.0,), (2.0,)), 30, shift_first=False) > 0.5
    assert hypergeometric_ode_residual(HyperParams(), 25, shift_first=False) < 1e-14


positive = st.floats(0.1, 4.0, allow_nan=False)


@settings(max_examples=40, deadline=None)
@given(st.lists(positive, max_size=2), st.lists(positive, max_size=2))
def test_ode_and_recurrence_hold_for_random_params(a, b):
    params = HyperParams(tuple(a), tuple(b))
    assert hypergeometric_ode_residual(params, 30) <= 1e-12 * max(1.0, _scale(params))
    assert theta_recurrence_check(params, 30) <= 1e-12


def _scale(params):
    s = series_from_pfq(params, 30).coeffs
    return float(np.max(np.abs(s) * np.arange(31) ** (1 + len(params.b))))


@given(coeff_lists)
def test_diagonal_actions_commute(coeffs):
    s = FormalSeries.from_list(coeffs)
    f = lambda n: 2.0 ** -n
    g = lambda n: n * n + 1.0
    assert func_of_theta_apply(f, func_of_theta_apply(g, s)) == func_of_theta_apply(g, func_of_theta_apply(f, s))


@given(coeff_lists, st.integers(0, 5))
def test_theta_power_is_function_of_theta(coeffs, m):
    s = FormalSeries.from_list(coeffs)
    assert theta_apply(s, m) == func_of_theta_apply(lambda n: float(n) ** m, s)


@given(coeff_lists, coeff_lists)
def test_theta_distributes_over_addition(c1, c2):
    n = min(len(c1), len(c2))
    s1, s2 = FormalSeries.from_list(c1[:n]), FormalSeries.from_list(c2[:n])
    lhs = theta_apply(s1 + s2, 1)
    rhs = theta_apply(s1, 1) + theta_apply(s2, 1)
    assert lhs == rhs


def test_formal_series_arithmetic_closes_at_order():
    a = FormalSeries.from_list([1.0, 2.0, 3.0])
    b = FormalSeries.from_list([1.0, 1.0])
    assert (a + b).order == 1 and (a + b).dropped == 3.0
    prod = a * b
    assert list(prod.coeffs) == [1.0, 3.0] and prod.dropped == 5.0
    assert list((2 * a).coeffs) == [2.0, 4.0, 6.0]
    up = a.shift_up()
    assert list(up.coeffs) == [0.0, 1.0, 2.0] and up.dropped == 3.0
    assert list(a.derivative(1).coeffs) == [2.0, 6.0]
    assert a(2.0) == 1 + 4 + 12


def test_formal_series_is_immutable():
    s = FormalSeries.from_list([1.0, 2.0])
    with pytest.raises(ValueError):
        s.coeffs[0] = 5.0
