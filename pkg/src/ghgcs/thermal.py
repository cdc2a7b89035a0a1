"""Thermal states over GHG and linear spectra.

Energies enter only through the dimensionless product beta * hbar * omega,
called ``beta`` throughout. Boltzmann factors are evaluated relative to the
ground level, exp(-beta (e(n) - e(0))), so the offset e0 of a linear spectrum
cancels exactly instead of through rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coherent_states import GHGSpectrum, LinearSpectrum, SpectrumModel, structure_rho
from .errors import ConfigurationError, ConvergenceError, DivergenceError
from .report import CaseRecord
from .special_functions import (
    GammaLaguerre,
    HyperParams,
    QuadratureSpec,
    integrate,
    integrate_weighted,
    pfq,
)

SUM_CAP = 100_000


@dataclass(frozen=True)
class ThermalModel:
    beta: float
    spectrum: SpectrumModel = LinearSpectrum()

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")

    @property
    def q_factor(self) -> float:
        return math.exp(-self.beta)

    @property
    def nbar(self) -> float:
        """Bose-Einstein occupation 1 / (e^beta - 1)."""
        return 1.0 / math.expm1(self.beta)

    @property
    def is_linear(self) -> bool:
        return isinstance(self.spectrum, LinearSpectrum)

    @property
    def e0(self) -> float:
        return self.spectrum.e0 if self.is_linear else 0.0

    def boltzmann_gap(self, n: int) -> float:
        return math.exp(-self.beta * self.spectrum.gap(n))


def _require_linear(model: ThermalModel):
    if not model.is_linear:
        raise ConfigurationError("this operation is defined for linear spectra only")


def _reduced_partition(model: ThermalModel, tol: float) -> float:
    """sum_n exp(-beta (e(n) - e(0)))."""
    sp = model.spectrum
    if isinstance(sp, GHGSpectrum) and sp.params.p > sp.params.q:
        raise DivergenceError(f"e(n) stays bounded for {sp.label()}; the partition sum diverges")
    total, small, n = 0.0, 0, 0
    while small < 3:
        term = model.boltzmann_gap(n)
        total += term
        small = small + 1 if term < tol * total else 0
        n += 1
        if n > SUM_CAP:
            raise DivergenceError("partition sum did not converge")
    return total


def partition_function(model: ThermalModel, tol: float = 1e-17) -> float:
    """Z = sum_n exp(-beta e(n)).

    For a linear spectrum the series is also compared with
    exp(-beta e0) / (1 - exp(-beta)); a mismatch above 1e-12 raises.
    """
    ground = math.exp(-model.beta * model.spectrum.e(0))
    z = ground * _reduced_partition(model, tol)
    if model.is_linear:
        closed = partition_closed_linear(model)
        if abs(z - closed) > 1e-12 * closed:
            raise ConvergenceError(f"partition series {z} and closed form {closed} disagree")
    return z


def partition_closed_linear(model: ThermalModel) -> float:
    _require_linear(model)
    return math.exp(-model.beta * model.e0) / -math.expm1(-model.beta)


def density_diag(model: ThermalModel, order: int, tol: float = 1e-17) -> np.ndarray:
    """Diagonal Fock elements exp(-beta e(n)) / Z for n = 0..order."""
    zr = _reduced_partition(model, tol)
    return np.array([model.boltzmann_gap(n) / zr for n in range(order + 1)])


def _check_params(model: ThermalModel, params: HyperParams | None) -> HyperParams:
    expected = model.spectrum.hyper_params
    if params is None:
        return expected
    if len(params.a) != len(expected.a) or len(params.b) != len(expected.b):
        raise ConfigurationError(f"{params} does not generate {model.spectrum.label()}")
    spec_from_params = GHGSpectrum(params)
    for n in range(1, 6):
        if not math.isclose(spec_from_params.e(n), model.spectrum.e(n), rel_tol=1e-13):
            raise ConfigurationError(f"{params} does not generate {model.spectrum.label()}")
    return params


def husimi_q_ratio(model: ThermalModel, params: HyperParams | None = None, x: float = 0.0, tol: float = 1e-17) -> float:
    """Q(x) = (1/Z) sum_n exp(-beta e(n)) x^n / rho(n), divided by pFq(x).

    This is the diagonal action of exp(-beta e(theta)) on the normalization
    function; it holds for every offset e0.
    """
    params = _check_params(model, params)
    zr = _reduced_partition(model, tol)
    norm = pfq(params, x).value
    total = 0.0
    term_x = 1.0
    small, n = 0, 0
    while small < 3:
        term = model.boltzmann_gap(n) * term_x
        total += term
        small = small + 1 if term < tol * total else 0
        n += 1
        term_x *= x / model.spectrum.e(n)
        if n > SUM_CAP:
            raise ConvergenceError("Husimi series did not converge")
    return total / (zr * norm)


@dataclass(frozen=True)
class ClosedHusimi:
    value: float
    nbar_form: float


def husimi_q_closed_linear(model: ThermalModel, x: float) -> float:
    """(1/Z) exp((q - 1) x), cross-checked against its occupation-number form."""
    return husimi_closed_forms(model, x).value


def husimi_closed_forms(model: ThermalModel, x: float) -> ClosedHusimi:
    _require_linear(model)
    q, nbar, e0 = model.q_factor, model.nbar, model.e0
    value = math.exp((q - 1.0) * x) / partition_closed_linear(model)
    nbar_form = (1.0 / (nbar + 1.0)) * ((nbar + 1.0) / nbar) ** e0 * math.exp(-x / (nbar + 1.0))
    if value and abs(value - nbar_form) > 1e-13 * abs(value):
        raise ArithmeticError(f"closed Husimi forms disagree: {value} vs {nbar_form}")
    return ClosedHusimi(value, nbar_form)


@dataclass(frozen=True)
class HusimiProbe:
    e0: float
    beta: float
    max_rel_deviation: float
    ratio_at_zero: float
    expected_ratio_at_zero: float
    asserted: bool


def husimi_consistency_probe(model: ThermalModel, x_grid) -> HusimiProbe:
    """Compare the series-ratio Husimi function with the closed Gaussian form.

    For e0 = 0 the two agree identically. For e0 > 0 they differ by the
    factor q^e0 at x = 0, so the deviation is only measured.
    """
    _require_linear(model)
    worst = 0.0
    for x in x_grid:
        r = husimi_q_ratio(model, None, x)
        c = husimi_q_closed_linear(model, x)
        worst = max(worst, abs(r - c) / abs(c))
    ratio0 = husimi_q_ratio(model, None, 0.0) / husimi_q_closed_linear(model, 0.0)
    return HusimiProbe(model.e0, model.beta, worst, ratio0, model.q_factor ** model.e0, model.e0 == 0)


def p_function_linear(model: ThermalModel, x: float, form: str = "final") -> float:
    """Glauber-Sudarshan weight for the linear spectrum.

    ``form="final"``: (1/nbar) exp(-x/nbar) = (e^beta - 1) exp(-(e^beta - 1) x).
    ``form="unsimplified"``: (e^beta - 1) e^(beta e0) exp(-(e^beta - 1) x), the
    ratio of gamma-Laguerre weights before the e0-dependent factor is dropped.
    The two coincide at e0 = 0.
    """
    _require_linear(model)
    rate = math.expm1(model.beta)
    value = rate * math.exp(-rate * x)
    if form == "final":
        return value
    if form == "unsimplified":
        return value * math.exp(model.beta * model.e0)
    raise ValueError(f"unknown P-function form {form!r}")


def p_tilde(model: ThermalModel, t: float) -> float:
    """exp(-beta e0) E exp(-E t) (E t)^e0 with E = e^beta."""
    big_e = math.exp(model.beta)
    return math.exp(-model.beta * model.e0) * big_e * math.exp(-big_e * t) * (big_e * t) ** model.e0


def p_moment_check(model: ThermalModel, n_max: int = 10, spec: QuadratureSpec = QuadratureSpec(),
                   tolerance: float = 1e-8) -> CaseRecord:
    """int P~(t) t^n dt against Gamma(e0+1) rho(n) exp(-beta e(n)) for n <= n_max."""
    _require_linear(model)
    e0 = model.e0
    worst = (-1.0, 0, 0.0, 0.0)
    for n in range(n_max + 1):
        lhs = integrate(lambda t, n=n: p_tilde(model, t) * t ** n, (0.0, math.inf), spec).value
        rhs = math.gamma(e0 + 1.0) * structure_rho(model.spectrum, n) * math.exp(-model.beta * model.spectrum.e(n))
        err = abs(lhs - rhs) / abs(rhs)
        if err > worst[0]:
            worst = (err, n, lhs, rhs)
    return CaseRecord(
        name=f"thermal/p-moments/e0={e0:g},beta={model.beta:.6g}",
        tag="p-function-moments",
        params={"e0": e0, "beta": model.beta, "n_max": n_max, "worst_n": worst[1]},
        lhs=worst[2], rhs=worst[3], error=worst[0], tolerance=tolerance,
    )


@dataclass(frozen=True)
class Reconstruction:
    max_error: float
    worst_n: int
    reconstructed: tuple[float, ...]
    expected: tuple[float, ...]


def density_reconstruction_check(model: ThermalModel, order: int = 10, spec: QuadratureSpec = QuadratureSpec(),
                                 form: str = "final") -> Reconstruction:
    """Rebuild rho_nn = int dmu(x) P(x) |<n|z>|^2 and compare with :func:`density_diag`.

    The linear-spectrum measure is e^{-x} x^e0 1F1(1; e0+1; x) / Gamma(e0+1)
    and P is used as the complete weight, with no extra 1/Z.
    """
    _require_linear(model)
    if order > 20:
        raise ValueError("order must be <= 20")
    e0 = model.e0
    params = model.spectrum.hyper_params
    family = GammaLaguerre(e0)
    g0 = math.gamma(e0 + 1.0)
    target = density_diag(model, order)
    rebuilt = []
    for n in range(order + 1):
        rho_n = structure_rho(model.spectrum, n)

        def g(x, n=n):
            norm = pfq(params, x).value
            amp2 = x ** n / (rho_n * norm)
            return norm * p_function_linear(model, x, form) * amp2 / g0

        rebuilt.append(integrate_weighted(family, g, spec).value)
    errors = [abs(r - t) / t for r, t in zip(rebuilt, target)]
    worst = int(np.argmax(errors))
    return Reconstruction(errors[worst], worst, tuple(rebuilt), tuple(target))


def husimi_normalization_check(model: ThermalModel, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """|int dmu(x) Q(x) - 1| with Q from the series-ratio form."""
    _require_linear(model)
    e0 = model.e0
    params = model.spectrum.hyper_params
    g0 = math.gamma(e0 + 1.0)

    def g(x):
        return pfq(params, x).value * husimi_q_ratio(model, params, x) / g0

    return abs(integrate_weighted(GammaLaguerre(e0), g, spec).value - 1.0)
