"""Scalar special-function kernel.

Gamma and Pochhammer symbols, Stirling numbers of the second kind, the
generalized hypergeometric series pFq, its convergence radius, the three
closed-form measure weights and an adaptive quadrature front end.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import integrate as _sp_integrate
from scipy import special as _sp_special

from .errors import (
    AccuracyError,
    ConvergenceError,
    DivergenceError,
    DomainError,
    ParameterError,
    ZeroRadiusError,
)

MAX_ORDER_PQ = 4
SERIES_TERM_CAP = 10_000
POCHHAMMER_DIRECT_MAX = 500
STIRLING_MAX_N = 30
NEAR_RADIUS_FRACTION = 0.95
CANCELLATION_WARN = 1e4


def _is_nonpositive_integer(v: float) -> bool:
    return v <= 0 and float(v).is_integer()


@dataclass(frozen=True)
class HyperParams:
    """Upper (``a``) and lower (``b``) parameter vectors of a pFq series."""

    a: tuple[float, ...] = ()
    b: tuple[float, ...] = ()

    def __post_init__(self):
        a = tuple(float(v) for v in self.a)
        b = tuple(float(v) for v in self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if len(a) > MAX_ORDER_PQ or len(b) > MAX_ORDER_PQ:
            raise ParameterError(f"p and q must be <= {MAX_ORDER_PQ}, got p={len(a)}, q={len(b)}")
        if not all(math.isfinite(v) for v in a + b):
            raise ParameterError("parameters must be finite")
        for v in b:
            if _is_nonpositive_integer(v):
                raise ParameterError(f"lower parameter {v} is zero or a negative integer")

    @property
    def p(self) -> int:
        return len(self.a)

    @property
    def q(self) -> int:
        return len(self.b)

    @property
    def terminating(self) -> bool:
        """True when some upper parameter is 0 or a negative integer (polynomial)."""
        return any(_is_nonpositive_integer(v) for v in self.a)

    def require_positive(self) -> "HyperParams":
        """Check the stricter condition used for coherent states (all a_i, b_j > 0)."""
        if any(v <= 0 for v in self.a + self.b):
            raise ParameterError("coherent-state parameters must all be positive")
        return self

    def gamma_ratio(self) -> float:
        """prod Gamma(b_j) / prod Gamma(a_i), the prefactor of the moment problem."""
        self.require_positive()
        log = sum(math.lgamma(v) for v in self.b) - sum(math.lgamma(v) for v in self.a)
        return math.exp(log)

    def __str__(self):
        a = ",".join(f"{v:g}" for v in self.a)
        b = ",".join(f"{v:g}" for v in self.b)
        return f"{self.p}F{self.q}({a};{b})"


@dataclass(frozen=True)
class SeriesEval:
    """Result of a series summation.

    ``tail_estimate`` bounds the neglected remainder: it is the magnitude of
    the first neglected term scaled by the geometric factor 1/(1 - r), where
    r bounds the later term ratios.
    """

    value: complex | float
    terms_used: int
    tail_estimate: float
    warnings: tuple[str, ...] = ()


def ln_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if not x > 0:
        raise DomainError(f"ln_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def pochhammer(a: float, n: int) -> float:
    """Rising factorial (a)_n = a (a+1) ... (a+n-1).

    Direct product up to n = 500, gamma-ratio fallback above that.
    """
    if n < 0:
        raise DomainError(f"pochhammer requires n >= 0, got {n}")
    if n <= POCHHAMMER_DIRECT_MAX:
        out = 1.0
        for k in range(n):
            out *= a + k
        return out
    return float(_sp_special.poch(a, n))


def pochhammer_recurrence_check(a: float, n: int, rtol: float = 1e-12) -> bool:
    """Check (a)_{n+1} = (a+n)(a)_n and, for a != 0, (a+1)_n = (a)_{n+1}/a."""
    if n < 1:
        raise DomainError("pochhammer_recurrence_check requires n >= 1")
    lhs = pochhammer(a, n + 1)
    ok = math.isclose(lhs, (a + n) * pochhammer(a, n), rel_tol=rtol, abs_tol=0.0 if lhs else 1e-300)
    if a != 0:
        shifted = pochhammer(a + 1, n)
        ok = ok and math.isclose(shifted, lhs / a, rel_tol=rtol, abs_tol=0.0 if shifted else 1e-300)
    return ok


@lru_cache(maxsize=None)
def _stirling2_row(n: int) -> tuple[int, ...]:
    if n == 0:
        return (1,)
    prev = _stirling2_row(n - 1) + (0,)
    row = [0] * (n + 1)
    for k in range(1, n + 1):
        row[k] = k * prev[k] + prev[k - 1]
    return tuple(row)


def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind S(n, k), exact."""
    if n > STIRLING_MAX_N:
        raise DomainError(f"stirling2 is guarded to n <= {STIRLING_MAX_N}, got {n}")
    if n < 0 or k < 0 or k > n:
        raise DomainError(f"stirling2 requires 0 <= k <= n, got n={n}, k={k}")
    return _stirling2_row(n)[k]


def structure_constant(params: HyperParams, n: int) -> float:
    """rho_{p,q}(n) = n! prod (b_j)_n / prod (a_i)_n, so that pFq = sum x^n / rho(n)."""
    if n < 0:
        raise DomainError("n must be >= 0")
    # running product of per-step ratios: no intermediate overflow
    out = 1.0
    for m in range(1, n + 1):
        den = math.prod(a + m - 1 for a in params.a)
        if den == 0:
            return math.inf
        out *= m * math.prod(b + m - 1 for b in params.b) / den
    return out


def _ratio_factor(params: HyperParams, n: int) -> float:
    """Term ratio t_{n+1}/t_n without the argument: prod(a+n) / (prod(b+n) (n+1))."""
    num = math.prod(a + n for a in params.a)
    den = math.prod(b + n for b in params.b) * (n + 1)
    return num / den


@dataclass(frozen=True)
class RadiusEstimate:
    """Convergence radius with the diagnostics of its numerical estimate.

    ``literal_value`` is the limit of rho(n)/rho(n+1), recorded next to the
    ratio rho(n+1)/rho(n) that is actually used.
    """

    value: float
    last_delta: float
    literal_value: float


def radius_estimate(params: HyperParams, n_max: int = 10_000) -> RadiusEstimate:
    if params.terminating:
        return RadiusEstimate(math.inf, 0.0, math.inf)
    if params.p <= params.q:
        return RadiusEstimate(math.inf, 0.0, 0.0)
    if params.p > params.q + 1:
        raise ZeroRadiusError(f"{params}: p > q + 1, the series diverges for every x != 0")

    def ratio(n):
        # rho(n+1)/rho(n) = e(n+1)
        return 1.0 / _ratio_factor(params, n)

    # Two-level Richardson extrapolation on the 1/n expansion of e(n+1).
    n1, n2, n3 = n_max // 4, n_max // 2, n_max
    r1, r2, r3 = ratio(n1), ratio(n2), ratio(n3)
    s12 = 2.0 * r2 - r1
    s23 = 2.0 * r3 - r2
    value = (4.0 * s23 - s12) / 3.0
    return RadiusEstimate(value, abs(value - s23), 1.0 / value)


def convergence_radius(params: HyperParams) -> float:
    """Radius of convergence of the pFq series in x.

    Infinite for p <= q (Stieltjes branch), the limit of rho(n+1)/rho(n) for
    p = q + 1; raises :class:`ZeroRadiusError` for p > q + 1.
    """
    return radius_estimate(params).value


def pfq(params: HyperParams, x: complex | float, tol: float = 1e-16) -> SeriesEval:
    """Sum the generalized hypergeometric series pFq(a; b; x).

    Stops once three consecutive terms are below ``tol * |partial sum|``,
    with a hard cap of 10 000 terms.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    radius = convergence_radius(params)
    ax = abs(x)
    notes = []
    if ax >= radius:
        raise DivergenceError(f"|x| = {ax} is outside the convergence radius {radius} of {params}")
    if math.isfinite(radius) and ax > NEAR_RADIUS_FRACTION * radius:
        notes.append(f"|x| = {ax:g} exceeds {NEAR_RADIUS_FRACTION} of the radius; widen tol")

    is_complex = isinstance(x, complex) or np.iscomplexobj(x)
    term = 1.0 + 0.0j if is_complex else 1.0
    total = term
    terms = [term]
    small = 0
    n = 0
    while True:
        term = term * _ratio_factor(params, n) * x
        n += 1
        if abs(term) < tol * abs(total) or term == 0:
            small += 1
        else:
            small = 0
        total += term
        terms.append(term)
        if small == 3:
            break
        if n >= SERIES_TERM_CAP:
            raise ConvergenceError(f"pFq{params} at x={x} did not converge in {SERIES_TERM_CAP} terms")

    nxt = term * _ratio_factor(params, n) * x
    r_now = abs(_ratio_factor(params, n + 1) * x)
    r_lim = ax if params.p == params.q + 1 else 0.0
    r = max(r_now, r_lim)
    tail = abs(nxt) / (1.0 - r) if r < 1.0 else math.inf
    if not math.isfinite(abs(total)):
        raise ConvergenceError(f"pFq{params} at x={x} overflows double precision")
    # the running sum drives the stopping rule; the reported value is rounded once
    if is_complex:
        total = complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
    else:
        total = math.fsum(terms)
    magnitude = math.fsum(abs(t) for t in terms)
    if magnitude > CANCELLATION_WARN * abs(total):
        notes.append(f"cancellation: sum|terms| / |sum| = {magnitude / abs(total) if total else math.inf:.3g}")
    return SeriesEval(total, n + 1, tail, tuple(notes))


def pfq_value(params: HyperParams, x: complex | float, tol: float = 1e-16):
    return pfq(params, x, tol).value


# -- measure weights ---------------------------------------------------------


@dataclass(frozen=True)
class Exponential:
    """w(t) = exp(-t) on [0, inf); the harmonic-oscillator measure."""

    support = (0.0, math.inf)

    def weight(self, t):
        return np.exp(-np.asarray(t, dtype=float))

    @property
    def params(self) -> HyperParams:
        return HyperParams((), ())

    def label(self) -> str:
        return "exponential"


@dataclass(frozen=True)
class Beta:
    """w(t) = (1 - t)^(a-1) / Gamma(a) on [0, 1], paired with pF q = 1F0(a+1;;x)."""

    a: float
    support = (0.0, 1.0)

    def __post_init__(self):
        if not self.a > 0:
            raise ParameterError(f"Beta weight requires a > 0, got {self.a}")

    def weight(self, t):
        t = np.asarray(t, dtype=float)
        return np.power(1.0 - t, self.a - 1.0) / math.gamma(self.a)

    @property
    def params(self) -> HyperParams:
        return HyperParams((self.a + 1.0,), ())

    def label(self) -> str:
        return f"beta(a={self.a:g})"


@dataclass(frozen=True)
class GammaLaguerre:
    """w(t) = exp(-t) t^e0 on [0, inf), paired with 1F1(1; e0+1; x)."""

    e0: float
    support = (0.0, math.inf)

    def __post_init__(self):
        if not self.e0 >= 0:
            raise ParameterError(f"GammaLaguerre weight requires e0 >= 0, got {self.e0}")

    def weight(self, t):
        t = np.asarray(t, dtype=float)
        return np.exp(-t) * np.power(t, self.e0)

    @property
    def params(self) -> HyperParams:
        return HyperParams((1.0,), (self.e0 + 1.0,))

    def label(self) -> str:
        return f"gamma-laguerre(e0={self.e0:g})"


WeightFamily = Exponential | Beta | GammaLaguerre


def weight_eval(family: WeightFamily, t: float) -> float:
    lo, hi = family.support
    if not lo <= t <= hi:
        raise DomainError(f"t = {t} outside the support [{lo}, {hi}] of {family.label()}")
    return float(family.weight(t))


# -- quadrature --------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances for :func:`integrate`.

    On [0, inf) the integral is truncated at the first T where
    ``T * max|f|`` over the next segment drops below
    ``cutoff_factor * max(abs_tol, rel_tol * |running integral|)``.
    """

    rel_tol: float = 1e-12
    abs_tol: float = 1e-15
    max_subdivisions: int = 200
    cutoff_factor: float = 1e-2
    max_cutoff: float = 5_000.0

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0 and self.max_subdivisions >= 1):
            raise DomainError("QuadratureSpec needs rel_tol > 0, abs_tol > 0, max_subdivisions >= 1")


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    cutoff: float | None = None
    pieces: int = 1


def _quad_piece(f, lo, hi, spec: QuadratureSpec):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        out = _sp_integrate.quad(
            f, lo, hi,
            epsabs=spec.abs_tol * 1e-2, epsrel=spec.rel_tol * 1e-1,
            limit=spec.max_subdivisions, full_output=1,
        )
    # a fourth element is only present when QUADPACK reports ier > 0
    msg = out[3].splitlines()[0] if len(out) > 3 else ""
    return out[0], out[1], msg


def integrate(f: Callable[[float], float], support: Sequence[float], spec: QuadratureSpec = QuadratureSpec()) -> QuadResult:
    """Adaptive Gauss-Kronrod integration of ``f`` over ``support``.

    A semi-infinite upper limit is handled by the envelope cutoff policy of
    :class:`QuadratureSpec`; all integrands in this package decay
    exponentially.
    """
    lo, hi = float(support[0]), float(support[1])
    if math.isfinite(hi):
        value, err, msg = _quad_piece(f, lo, hi, spec)
        _check_accuracy(value, err, msg, spec)
        return QuadResult(value, err)

    total, err_total = 0.0, 0.0
    left, right = lo, lo + 1.0
    pieces = 0
    while True:
        value, err, msg = _quad_piece(f, left, right, spec)
        if msg:
            raise AccuracyError(f"quadrature failed on [{left}, {right}]: {msg}", total + value, err_total + err)
        total += value
        err_total += err
        pieces += 1
        nxt = right * 1.5
        probe = np.linspace(right, nxt, 7)
        env = max(abs(f(t)) for t in probe) * right
        threshold = spec.cutoff_factor * max(spec.abs_tol, spec.rel_tol * abs(total))
        if env < threshold and abs(f(nxt)) <= abs(f(right)):
            break
        if nxt > spec.max_cutoff:
            raise AccuracyError(f"integrand not negligible before t = {spec.max_cutoff}", total, math.inf)
        left, right = right, nxt
    _check_accuracy(total, err_total, "", spec)
    return QuadResult(total, err_total, cutoff=right, pieces=pieces)


def _check_accuracy(value, err, msg, spec: QuadratureSpec):
    if msg or err > spec.rel_tol * abs(value) + spec.abs_tol:
        raise AccuracyError(
            f"quadrature error {err:.3g} exceeds the requested accuracy ({msg or 'tolerance'})", value, err
        )


def integrate_weighted(family: WeightFamily, g: Callable[[float], float], spec: QuadratureSpec = QuadratureSpec()) -> QuadResult:
    """Integrate w(t) g(t) over the support of ``family``.

    For Beta weights with a < 1 the half [1/2, 1] is mapped through
    u = (1 - t)^a, which removes the endpoint singularity exactly.
    """
    if isinstance(family, Beta) and family.a < 1.0:
        a = family.a
        head = integrate(lambda t: float(family.weight(t)) * g(t), (0.0, 0.5), spec)
        scale = 1.0 / (a * math.gamma(a))
        tail = integrate(lambda u: scale * g(1.0 - u ** (1.0 / a)), (0.0, 0.5 ** a), spec)
        return QuadResult(head.value + tail.value, head.error + tail.error, pieces=2)
    return integrate(lambda t: float(family.weight(t)) * g(t), family.support, spec)
