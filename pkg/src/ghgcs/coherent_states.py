"""Generalized hypergeometric coherent states in a truncated Fock basis."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ConvergenceError, DivergenceError, SpectrumError
from .report import CaseRecord
from .special_functions import (
    HyperParams,
    QuadratureSpec,
    WeightFamily,
    convergence_radius,
    integrate_weighted,
    pfq,
)

DEFAULT_FOCK_ORDER = 64
NORM_TAIL_TARGET = 1e-12


@dataclass(frozen=True)
class GHGSpectrum:
    """e(m) = m prod(b_j + m - 1) / prod(a_i + m - 1), with e(0) = 0."""

    params: HyperParams

    def __post_init__(self):
        self.params.require_positive()

    def e(self, m: int) -> float:
        if m == 0:
            return 0.0
        a, b = self.params.a, self.params.b
        return m * math.prod(v + m - 1 for v in b) / math.prod(v + m - 1 for v in a)

    def gap(self, m: int) -> float:
        return self.e(m)

    @property
    def hyper_params(self) -> HyperParams:
        return self.params

    def label(self) -> str:
        return f"ghg[{self.params}]"


@dataclass(frozen=True)
class LinearSpectrum:
    """e(n) = n + e0, the structure function (e0 + 1)_n of 1F1(1; e0+1; x)."""

    e0: float = 0.0

    def __post_init__(self):
        if not self.e0 >= 0:
            raise SpectrumError(f"linear spectrum needs e0 >= 0, got {self.e0}")

    def e(self, m: int) -> float:
        return m + self.e0

    def gap(self, m: int) -> float:
        """e(m) - e(0), exact for the linear spectrum."""
        return float(m)

    @property
    def hyper_params(self) -> HyperParams:
        return HyperParams((1.0,), (self.e0 + 1.0,))

    def label(self) -> str:
        return f"linear[e0={self.e0:g}]"


SpectrumModel = GHGSpectrum | LinearSpectrum


def eigen_e(spectrum: SpectrumModel, m: int) -> float:
    return spectrum.e(m)


def structure_rho(spectrum: SpectrumModel, n: int) -> float:
    """rho(n) = prod_{m=1}^{n} e(m)."""
    out = 1.0
    for m in range(1, n + 1):
        em = spectrum.e(m)
        if not em > 0:
            raise SpectrumError(f"e({m}) = {em} is not positive for {spectrum.label()}")
        out *= em
    return out


def _log_rho_table(spectrum: SpectrumModel, order: int) -> np.ndarray:
    logs = np.zeros(order + 1)
    for m in range(1, order + 1):
        em = spectrum.e(m)
        if not em > 0:
            raise SpectrumError(f"e({m}) = {em} is not positive for {spectrum.label()}")
        logs[m] = logs[m - 1] + math.log(em)
    return logs


@dataclass(frozen=True, eq=False)
class CoherentStateVec:
    z: complex
    params: HyperParams
    order: int
    amps: np.ndarray
    norm_defect: float
    normalization: float

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2


def _normalization_tail(params: HyperParams, x: float, order: int, total: float) -> float:
    """sum_{n > order} x^n / rho(n), divided by the full normalization."""
    if x == 0:
        return 0.0
    spectrum = GHGSpectrum(params)
    log_term = sum(math.log(spectrum.e(m)) for m in range(1, order + 2))
    term = math.exp((order + 1) * math.log(x) - log_term)
    tail = 0.0
    n = order + 1
    small = 0
    while small < 3:
        tail += term
        n += 1
        term *= x / spectrum.e(n)
        small = small + 1 if term < 1e-17 * max(tail, 1e-300) else 0
        if n > order + 10_000:
            raise ConvergenceError("normalization tail did not converge")
    return tail / total


def cs_amplitudes(params: HyperParams, z: complex, order: int = DEFAULT_FOCK_ORDER) -> CoherentStateVec:
    """Fock amplitudes <n|z> = z^n / sqrt(rho(n) N(|z|^2)), n = 0..order."""
    params.require_positive()
    z = complex(z)
    x = abs(z) ** 2
    radius = convergence_radius(params)
    if x >= radius:
        raise DivergenceError(f"|z|^2 = {x} outside the convergence radius {radius}")
    norm = float(pfq(params, x).value)
    amps = np.zeros(order + 1, dtype=complex)
    amps[0] = 1.0 / math.sqrt(norm)
    if x > 0:
        log_rho = _log_rho_table(GHGSpectrum(params), order)
        n = np.arange(order + 1)
        log_mag = n * math.log(abs(z)) - 0.5 * log_rho - 0.5 * math.log(norm)
        amps = np.exp(log_mag) * np.exp(1j * cmath.phase(z) * n)
    defect = _normalization_tail(params, x, order, norm)
    return CoherentStateVec(z, params, order, amps, defect, norm)


def overlap(params: HyperParams, z1: complex, z2: complex, order: int = DEFAULT_FOCK_ORDER, rtol: float = 1e-10) -> complex:
    """<z1|z2> from Fock amplitudes, cross-checked against the closed kernel.

    The kernel is pFq(conj(z1) z2) / sqrt(N(|z1|^2) N(|z2|^2)).
    """
    s1 = cs_amplitudes(params, z1, order)
    s2 = cs_amplitudes(params, z2, order)
    value = complex(np.vdot(s1.amps, s2.amps))
    kernel = pfq(params, complex(np.conj(z1) * z2)).value / math.sqrt(s1.normalization * s2.normalization)
    if abs(value - kernel) > rtol * max(1.0, abs(kernel)):
        raise ConvergenceError(
            f"amplitude overlap {value} and kernel {kernel} disagree; increase order (now {order})"
        )
    return value


@dataclass(frozen=True, eq=False)
class LadderMatrices:
    lowering: np.ndarray
    raising: np.ndarray
    spectrum: SpectrumModel

    @property
    def number_like(self) -> np.ndarray:
        """raising @ lowering, diagonal with entries e(1), e(2), ... (0 at the vacuum)."""
        return self.raising @ self.lowering


def ladder_matrices(spectrum: SpectrumModel, order: int = DEFAULT_FOCK_ORDER) -> LadderMatrices:
    """Lowering operator with sqrt(e(n)) on the (n-1, n) entries and its transpose."""
    if order < 1:
        raise ValueError("order must be >= 1")
    energies = np.array([spectrum.e(n) for n in range(1, order + 1)])
    if not np.all(energies > 0):
        raise SpectrumError(f"non-positive eigenvalue in {spectrum.label()}")
    lowering = np.diag(np.sqrt(energies), k=1)
    ladders = LadderMatrices(lowering, lowering.T.copy(), spectrum)
    product = ladders.number_like
    expected = np.diag(np.concatenate([[0.0], energies]))
    if not np.allclose(product, expected, rtol=1e-13, atol=0.0):
        raise SpectrumError("raising @ lowering is not diag(e(n))")
    return ladders


@dataclass(frozen=True)
class EigenResidual:
    residual: float
    truncation_bound: float


def annihilation_eigen_check(cs: CoherentStateVec, spectrum: SpectrumModel) -> EigenResidual:
    """|| (A_- - z) amps || over components 0..N-1.

    Only component N is affected by truncation; its size, |z| |amps[N]|, is
    returned as the bound.
    """
    ladders = ladder_matrices(spectrum, cs.order)
    vec = ladders.lowering @ cs.amps - cs.z * cs.amps
    residual = float(np.linalg.norm(vec[:-1]))
    bound = abs(cs.z) * abs(cs.amps[-1])
    return EigenResidual(residual, bound)


def _matching_params(family: WeightFamily) -> HyperParams:
    return family.params


def _check_match(family: WeightFamily, spectrum: SpectrumModel | HyperParams) -> HyperParams:
    params = spectrum if isinstance(spectrum, HyperParams) else spectrum.hyper_params
    expected = _matching_params(family)
    if len(params.a) != len(expected.a) or len(params.b) != len(expected.b) or not (
        np.allclose(params.a, expected.a, rtol=1e-14) and np.allclose(params.b, expected.b, rtol=1e-14)
    ):
        raise ConfigurationError(f"weight {family.label()} does not match {params}; expected {expected}")
    return params


def moment_identity_check(
    family: WeightFamily,
    spectrum: SpectrumModel | HyperParams,
    n_max: int = 20,
    spec: QuadratureSpec = QuadratureSpec(),
    tolerance: float = 1e-8,
) -> CaseRecord:
    """Quadrature moments int w(t) t^n dt against [prod Gamma(b)/prod Gamma(a)] rho(n)."""
    params = _check_match(family, spectrum)
    prefactor = params.gamma_ratio()
    spec_model = GHGSpectrum(params)
    worst_n, worst, worst_lhs, worst_rhs = 0, -1.0, 0.0, 0.0
    for n in range(n_max + 1):
        lhs = integrate_weighted(family, lambda t, n=n: t ** n, spec).value
        rhs = prefactor * structure_rho(spec_model, n)
        err = abs(lhs - rhs) / abs(rhs)
        if err > worst:
            worst_n, worst, worst_lhs, worst_rhs = n, err, lhs, rhs
    return CaseRecord(
        name=f"moments/{family.label()}",
        tag="measure-moments",
        params={"family": family.label(), "n_max": n_max, "worst_n": worst_n},
        lhs=worst_lhs,
        rhs=worst_rhs,
        error=worst,
        tolerance=tolerance,
    )


@dataclass(frozen=True)
class ResolutionResult:
    max_offdiag: float
    max_diag_error: float
    worst_n: int
    diagonal: tuple[float, ...]


def identity_resolution_check(
    params: HyperParams,
    family: WeightFamily,
    order: int = 20,
    spec: QuadratureSpec = QuadratureSpec(),
) -> ResolutionResult:
    """Diagonal of int dmu |z><z| in the Fock basis.

    The angular integral is done analytically, so off-diagonal entries are
    zero by construction. The radial integrand is
    [prod Gamma(a)/prod Gamma(b)] w(t) N(t) * t^n / (rho(n) N(t)); N(t) is
    evaluated by series when the radius is infinite and cancelled
    analytically on finite-radius supports where it blows up at t = 1.
    """
    _check_match(family, params)
    prefactor = 1.0 / params.gamma_ratio()
    spectrum = GHGSpectrum(params)
    finite_radius = math.isfinite(convergence_radius(params))
    diag = []
    for n in range(order + 1):
        rho_n = structure_rho(spectrum, n)
        if finite_radius:
            integrand = lambda t, n=n: t ** n / rho_n
        else:
            def integrand(t, n=n):
                norm = pfq(params, t, tol=1e-17).value
                return norm * (t ** n / (rho_n * norm))
        diag.append(prefactor * integrate_weighted(family, integrand, spec).value)
    errors = [abs(d - 1.0) for d in diag]
    worst_n = int(np.argmax(errors))
    return ResolutionResult(0.0, errors[worst_n], worst_n, tuple(diag))
