"""The theta operator x d/dx acting on truncated power series.

Theta is diagonal on monomials, so every function of it is realised as a
coefficient-wise multiplication. Nothing here differentiates numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, ParameterError
from .special_functions import HyperParams, stirling2, structure_constant

MAX_SERIES_ORDER = 1000
DEFAULT_ORDER = 30
RELIABLE_TAIL = 1e-15


@dataclass(frozen=True, eq=False)
class FormalSeries:
    """Coefficients c_0 .. c_N of a power series truncated at order N.

    ``dropped`` holds the largest magnitude discarded by arithmetic that
    would have produced terms above order N.
    """

    coeffs: np.ndarray
    dropped: float = 0.0

    def __post_init__(self):
        c = np.array(self.coeffs, copy=True)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("FormalSeries needs at least one coefficient")
        if not np.iscomplexobj(c):
            c = c.astype(float)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_list(cls, values) -> "FormalSeries":
        return cls(np.asarray(values))

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def __len__(self):
        return self.coeffs.size

    def __eq__(self, other):
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return self.order == other.order and np.array_equal(self.coeffs, other.coeffs)

    def __add__(self, other: "FormalSeries") -> "FormalSeries":
        n = min(self.order, other.order)
        lost = max(_max_abs(self.coeffs[n + 1:]), _max_abs(other.coeffs[n + 1:]))
        return FormalSeries(self.coeffs[: n + 1] + other.coeffs[: n + 1], max(self.dropped, other.dropped, lost))

    def scale(self, alpha) -> "FormalSeries":
        return FormalSeries(alpha * self.coeffs, self.dropped)

    def __mul__(self, other):
        if isinstance(other, FormalSeries):
            return self.cauchy(other)
        return self.scale(other)

    __rmul__ = __mul__

    def cauchy(self, other: "FormalSeries") -> "FormalSeries":
        """Cauchy product, closed at the smaller of the two orders."""
        n = min(self.order, other.order)
        full = np.convolve(self.coeffs, other.coeffs)
        return FormalSeries(full[: n + 1], max(self.dropped, other.dropped, _max_abs(full[n + 1:])))

    def shift_up(self) -> "FormalSeries":
        """Multiply by x: coefficients move up one index, the top one is dropped."""
        c = np.concatenate([np.zeros(1, dtype=self.coeffs.dtype), self.coeffs[:-1]])
        return FormalSeries(c, max(self.dropped, abs(self.coeffs[-1])))

    def derivative(self, k: int = 1) -> "FormalSeries":
        """k-th derivative, exact for polynomials (order shrinks by k)."""
        if k == 0:
            return self
        n = np.arange(self.coeffs.size)
        falling = np.ones(self.coeffs.size)
        for j in range(k):
            falling = falling * (n - j)
        c = (falling * self.coeffs)[k:]
        if c.size == 0:
            c = np.zeros(1, dtype=self.coeffs.dtype)
        return FormalSeries(c, self.dropped)

    def __call__(self, x):
        """Horner evaluation of the truncated sum."""
        out = 0.0 * x + 0.0 * self.coeffs[-1]
        for c in self.coeffs[::-1]:
            out = out * x + c
        return out

    def last_term(self, x) -> float:
        return abs(self.coeffs[-1]) * abs(x) ** self.order

    def evaluate_reliable(self, x, rtol: float = RELIABLE_TAIL):
        """Evaluate, raising :class:`DomainError` if the top term is not negligible."""
        value = self(x)
        if self.last_term(x) > rtol * max(abs(value), 1e-300):
            raise DomainError(f"x = {x} is outside the reliable region of an order-{self.order} series")
        return value


def _max_abs(arr) -> float:
    return float(np.max(np.abs(arr))) if len(arr) else 0.0


@dataclass(frozen=True)
class SpectrumFunction:
    """A rule n -> f(n) used as f(theta)."""

    rule: Callable[[int], float]
    label: str = "f"

    def __call__(self, n: int):
        return self.rule(n)


def series_from_pfq(params: HyperParams, order: int) -> FormalSeries:
    """Coefficients 1/rho_{p,q}(n), n = 0..order, of the pFq series."""
    if not 0 <= order <= MAX_SERIES_ORDER:
        raise ParameterError(f"order must be in [0, {MAX_SERIES_ORDER}], got {order}")
    return FormalSeries(np.array([1.0 / structure_constant(params, n) for n in range(order + 1)]))


def theta_apply(s: FormalSeries, power: int = 1) -> FormalSeries:
    """theta^power: c_n -> n^power c_n, with 0^0 = 1."""
    if power < 0:
        raise DomainError("power must be >= 0")
    n = np.arange(s.coeffs.size, dtype=float)
    return FormalSeries(n ** power * s.coeffs, s.dropped)


def func_of_theta_apply(f: SpectrumFunction | Callable[[int], float], s: FormalSeries) -> FormalSeries:
    """f(theta): c_n -> f(n) c_n."""
    try:
        values = np.array([f(n) for n in range(s.coeffs.size)], dtype=float)
    except ArithmeticError as exc:
        raise DomainError(f"{getattr(f, 'label', 'f')} cannot be evaluated on 0..{s.order}: {exc}") from exc
    if not np.all(np.isfinite(values)):
        bad = int(np.argmin(np.isfinite(values)))
        raise DomainError(f"{getattr(f, 'label', 'f')}({bad}) is not finite")
    return FormalSeries(values * s.coeffs, s.dropped)


def dilation_check(s: FormalSeries, gamma: float, x0: float) -> float:
    """|exp(gamma theta) s (x0) - s(e^gamma x0)|: theta exponentials act as dilations."""
    lhs = func_of_theta_apply(lambda n: math.exp(gamma * n), s).evaluate_reliable(x0)
    rhs = s.evaluate_reliable(math.exp(gamma) * x0)
    return float(abs(lhs - rhs))


def stirling_expansion_check(n: int, poly: FormalSeries, x0: float) -> float:
    """Compare theta^n poly with sum_k S(n,k) x^k poly^(k), both at x0."""
    if n > 15:
        raise DomainError("stirling_expansion_check is limited to n <= 15")
    lhs = theta_apply(poly, n)(x0)
    rhs = sum(stirling2(n, k) * x0 ** k * poly.derivative(k)(x0) for k in range(n + 1))
    return float(abs(lhs - rhs))


def _upper_factor(params: HyperParams, n: int) -> float:
    return math.prod(a + n - 1 for a in params.a)


def _lower_factor(params: HyperParams, n: int) -> float:
    return math.prod(b + n - 1 for b in params.b)


def theta_recurrence_check(params: HyperParams, order: int = DEFAULT_ORDER) -> float:
    """Max relative residual of n c_n = [prod(a+n-1)/prod(b+n-1)] c_{n-1}."""
    if order < 2:
        raise DomainError("order must be >= 2")
    c = series_from_pfq(params, order).coeffs
    worst = 0.0
    for n in range(1, order + 1):
        lhs = n * c[n]
        rhs = _upper_factor(params, n) / _lower_factor(params, n) * c[n - 1]
        scale = max(abs(lhs), abs(rhs))
        if scale:
            worst = max(worst, abs(lhs - rhs) / scale)
    return worst


def hypergeometric_ode_residual(params: HyperParams, order: int = DEFAULT_ORDER, shift_first: bool = True) -> float:
    """Largest coefficient of [theta B(theta) - x A(theta)] applied to the pFq series.

    A(theta) = prod(a_i + theta - 1) and B(theta) = prod(b_j + theta - 1).
    With ``shift_first`` the factor A is evaluated at the index reached after
    multiplying by x, which is the ordering under which the equation holds.
    ``shift_first=False`` applies A before the shift and is kept only to
    quantify that reading.
    """
    if order < 2:
        raise DomainError("order must be >= 2")
    s = series_from_pfq(params, order)
    left = func_of_theta_apply(lambda n: n * _lower_factor(params, n), s)
    if shift_first:
        right = func_of_theta_apply(lambda n: _upper_factor(params, n), s.shift_up())
    else:
        right = func_of_theta_apply(lambda n: _upper_factor(params, n), s).shift_up()
    residual = left.coeffs[:order] - right.coeffs[:order]
    return float(np.max(np.abs(residual)))
