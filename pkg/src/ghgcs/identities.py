"""Two-sided numerical checks of the integral and product identities.

Each check evaluates one side by quadrature (or a Cauchy product) and the
other by an independent series, and never tests an identity against itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DivergenceError
from .report import CaseRecord
from .special_functions import (
    Beta,
    Exponential,
    GammaLaguerre,
    HyperParams,
    QuadratureSpec,
    WeightFamily,
    convergence_radius,
    integrate,
    integrate_weighted,
    pfq,
    pochhammer,
    structure_constant,
)
from .theta_series import series_from_pfq

INFINITE_SUPPORT = (Exponential, GammaLaguerre)
# the radius is an extrapolated estimate; points this close to it count as on it
RADIUS_MARGIN = 1e-6


def _rel(lhs, rhs) -> float:
    return abs(lhs - rhs) / abs(rhs) if rhs else abs(lhs - rhs)


def _radius_or_reject(params: HyperParams) -> float:
    try:
        return convergence_radius(params)
    except DivergenceError as exc:
        raise ConfigurationError(f"right-side series diverges: {exc}") from exc


def ho1d_integral_check(c: float, spec: QuadratureSpec = QuadratureSpec(), tolerance: float = 1e-8) -> CaseRecord:
    """int_0^inf e^{-t} 0F1(;1;c t) dt = e^c."""
    if c < 0:
        raise ConfigurationError("c must be >= 0")
    inner = HyperParams((), (1.0,))
    lhs = integrate(lambda t: math.exp(-t) * pfq(inner, c * t).value, (0.0, math.inf), spec).value
    rhs = math.exp(c)
    return CaseRecord(
        name=f"identities/ho1d/c={c:g}", tag="ho1d-bessel-integral",
        params={"c": c}, lhs=lhs, rhs=rhs, error=_rel(lhs, rhs), tolerance=tolerance,
    )


def general_integral_rhs_params(family: WeightFamily, inner: HyperParams) -> HyperParams:
    """Parameters (1, b, c; a, d) of the series on the right of the measure integral."""
    outer = family.params
    return HyperParams((1.0,) + outer.b + inner.a, outer.a + inner.b)


def general_integral_check(family: WeightFamily, inner: HyperParams, C: float,
                           spec: QuadratureSpec = QuadratureSpec(), tolerance: float = 1e-7) -> CaseRecord:
    """int w(t) rFs(c; d; C t) dt = [prod Gamma(b)/prod Gamma(a)] (q+r+1)F(p+s)(1, b, c; a, d; C)."""
    rhs_params = general_integral_rhs_params(family, inner)
    radius = _radius_or_reject(rhs_params)
    if abs(C) >= radius * (1.0 - RADIUS_MARGIN):
        raise ConfigurationError(f"C = {C} is not inside the radius {radius} of {rhs_params}")
    if isinstance(family, INFINITE_SUPPORT) and inner.p > inner.q:
        raise ConfigurationError("inner series must be entire on a semi-infinite support")
    lhs = integrate_weighted(family, lambda t: pfq(inner, C * t).value, spec).value
    rhs = family.params.gamma_ratio() * pfq(rhs_params, C).value
    return CaseRecord(
        name=f"identities/measure-integral/{family.label()}/{inner}/C={C:g}", tag="measure-integral",
        params={"family": family.label(), "inner": str(inner), "C": C, "rhs_series": str(rhs_params)},
        lhs=lhs, rhs=rhs, error=_rel(lhs, rhs), tolerance=tolerance,
    )


@dataclass(frozen=True)
class KummerResult:
    corrected: CaseRecord
    literal: CaseRecord


def kummer_integral_check(a: float, C: float, spec: QuadratureSpec = QuadratureSpec(),
                          tolerance: float = 1e-8) -> KummerResult:
    """1F1(1; a+1; C) = a int_0^1 e^{Ct} (1-t)^{a-1} dt.

    The same integral without the factor a is also compared; it only agrees
    at a = 1 and is returned as a reported-only record otherwise.
    """
    if not a > 0:
        raise ConfigurationError("a must be > 0")
    beta = Beta(a)
    # int (1-t)^{a-1} g dt = Gamma(a) int w g dt
    integral = math.gamma(a) * integrate_weighted(beta, lambda t: math.exp(C * t), spec).value
    series = pfq(HyperParams((1.0,), (a + 1.0,)), C).value
    tag = f"a={a:g},C={C:g}"
    corrected = CaseRecord(
        name=f"identities/kummer/corrected/{tag}", tag="kummer-representation",
        params={"a": a, "C": C}, lhs=a * integral, rhs=series,
        error=_rel(a * integral, series), tolerance=tolerance,
    )
    literal = CaseRecord(
        name=f"identities/kummer/literal/{tag}", tag="kummer-representation-without-factor-a",
        params={"a": a, "C": C}, lhs=integral, rhs=series,
        error=_rel(integral, series), tolerance=tolerance,
        reported_only=a != 1.0,
        note="" if a == 1.0 else "literal form drops the factor a; residual measured only",
    )
    return KummerResult(corrected, literal)


def laplace_transform_check(inner: HyperParams, S: float, spec: QuadratureSpec = QuadratureSpec(),
                            tolerance: float = 1e-7) -> CaseRecord:
    """int_0^inf e^{-S t} rFs(c; d; t) dt = (1/S) (r+1)Fs(1, c; d; 1/S)."""
    if inner.p > inner.q:
        raise ConfigurationError("Laplace check needs r <= s")
    if inner.p == inner.q and S <= 1.0:
        raise ConfigurationError("S must exceed the exponential growth rate 1 of the inner series")
    rhs_params = HyperParams((1.0,) + inner.a, inner.b)
    if 1.0 / S >= _radius_or_reject(rhs_params) * (1.0 - RADIUS_MARGIN):
        raise ConfigurationError(f"1/S = {1 / S} is outside the radius of {rhs_params}")
    lhs = integrate(lambda t: math.exp(-S * t) * pfq(inner, t).value, (0.0, math.inf), spec).value
    rhs = pfq(rhs_params, 1.0 / S).value / S
    return CaseRecord(
        name=f"identities/laplace/{inner}/S={S:g}", tag="laplace-transform",
        params={"inner": str(inner), "S": S}, lhs=lhs, rhs=rhs, error=_rel(lhs, rhs), tolerance=tolerance,
    )


def _is_nonpositive_integer(v: float) -> bool:
    return v <= 0 and float(v).is_integer()


@dataclass(frozen=True)
class ProductCoefficient:
    m: int
    oracle: float
    formula: float | None
    error: float
    degenerate: bool


@dataclass(frozen=True)
class ProductResult:
    max_coeff_error: float
    coefficients: tuple[ProductCoefficient, ...]

    @property
    def degenerate(self) -> tuple[int, ...]:
        return tuple(c.m for c in self.coefficients if c.degenerate)


def product_formula_coefficient(left: HyperParams, right: HyperParams, g: float, m: int) -> float | None:
    """m-th coefficient of pFq(a;b;x) rFs(c;d;gx) from the terminating inner series.

    The inner (q+r+1)F(p+s)(-m, 1-m-b, c; 1-m-a, d; (-1)^{p+q+1} g) is summed
    explicitly over k = 0..m. Returns None when a lower Pochhammer factor
    vanishes before the sum terminates.
    """
    p, q = left.p, left.q
    upper = (-float(m),) + tuple(1.0 - m - b for b in left.b) + right.a
    lower = tuple(1.0 - m - a for a in left.a) + right.b
    arg = (-1.0) ** (p + q + 1) * g
    inner = 0.0
    for k in range(m + 1):
        den = math.prod(pochhammer(v, k) for v in lower)
        num = math.prod(pochhammer(v, k) for v in upper)
        if den == 0.0:
            if num == 0.0:
                break
            return None
        inner += num / den * arg ** k / math.factorial(k)
    prefactor = math.prod(pochhammer(a, m) for a in left.a) / math.prod(pochhammer(b, m) for b in left.b)
    return prefactor * inner / math.factorial(m)


def product_formula_check(left: HyperParams, right: HyperParams, g: float, order: int = 12) -> ProductResult:
    """Compare the product-formula coefficients with a Cauchy product, up to x^order.

    The error of each coefficient is scaled by sum_k |l_{m-k} r_k g^k|, the size
    of the terms that make it up, which stays meaningful when the
    coefficient itself cancels to zero.
    """
    if order > 20:
        raise ConfigurationError("order must be <= 20")
    lc = series_from_pfq(left, order).coeffs
    rc = series_from_pfq(right, order).coeffs * g ** np.arange(order + 1)
    coeffs = []
    worst = 0.0
    for m in range(order + 1):
        parts = lc[m::-1] * rc[: m + 1]
        oracle = float(np.sum(parts))
        scale = float(np.sum(np.abs(parts)))
        formula = product_formula_coefficient(left, right, g, m)
        if formula is None:
            coeffs.append(ProductCoefficient(m, oracle, None, math.nan, True))
            continue
        err = abs(formula - oracle) / scale if scale else abs(formula - oracle)
        worst = max(worst, err)
        coeffs.append(ProductCoefficient(m, oracle, formula, err, False))
    return ProductResult(worst, tuple(coeffs))


@dataclass(frozen=True)
class ChainPoint:
    x: float
    lhs: float
    rhs: float
    ratio: float


def kummer_exponential_chain_check(e0: float, beta: float, x_grid, tolerance: float = 1e-10) -> CaseRecord:
    """1F1(1; e0+1; x) e^{(q-1)x} against q^e0 1F1(1; e0+1; q x).

    Asserted only for e0 = 0; for e0 > 0 the pointwise ratio is measured
    (it equals q^{-e0} at x = 0) and the record is reported-only.
    """
    q = math.exp(-beta)
    params = HyperParams((1.0,), (e0 + 1.0,))
    points = []
    for x in x_grid:
        lhs = pfq(params, x).value * math.exp((q - 1.0) * x)
        rhs = q ** e0 * pfq(params, q * x).value
        points.append(ChainPoint(x, lhs, rhs, lhs / rhs))
    worst = max(points, key=lambda pt: abs(pt.lhs - pt.rhs) / abs(pt.rhs))
    at_zero = next((pt for pt in points if pt.x == 0), None)
    note = ""
    if e0 != 0:
        measured = at_zero.ratio if at_zero else math.nan
        note = f"lhs/rhs at x=0 is {measured:.17g}; q^-e0 = {q ** -e0:.17g}"
    return CaseRecord(
        name=f"identities/product-chain/e0={e0:g},beta={beta:.6g}", tag="kummer-exponential-product",
        params={"e0": e0, "beta": beta, "worst_x": worst.x},
        lhs=worst.lhs, rhs=worst.rhs, error=abs(worst.lhs - worst.rhs) / abs(worst.rhs),
        tolerance=tolerance, reported_only=e0 != 0, note=note,
    )


def angular_series_check(params: HyperParams, x_grid, tolerance: float = 1e-12) -> CaseRecord:
    """sum x^n / rho(n)^2 against its hypergeometric label 2pF(2q+1)(a, a; 1, b, b; x)."""
    labelled = HyperParams(params.a + params.a, (1.0,) + params.b + params.b)
    worst = (0.0, 0.0, 0.0, 0.0)
    for x in x_grid:
        direct, n, term = 0.0, 0, 1.0
        while True:
            term = x ** n / structure_constant(params, n) ** 2
            direct += term
            n += 1
            if term < 1e-18 * direct and n > 3:
                break
        label_val = pfq(labelled, x).value
        err = _rel(direct, label_val)
        if err >= worst[0]:
            worst = (err, x, direct, label_val)
    return CaseRecord(
        name=f"identities/angular-series/{params}", tag="angular-integral-series",
        params={"params": str(params), "worst_x": worst[1]},
        lhs=worst[2], rhs=worst[3], error=worst[0], tolerance=tolerance,
    )
