"""Verification suites: default grids and the drivers behind ``ghgcs verify``."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields, replace
from typing import Callable, Iterable

import numpy as np

from . import coherent_states as cs
from . import identities as ids
from . import theta_series as ts
from . import thermal as th
from .errors import ConfigurationError, GHGError
from .report import CaseRecord, VerifyReport
from .special_functions import (
    Beta,
    Exponential,
    GammaLaguerre,
    HyperParams,
    QuadratureSpec,
    convergence_radius,
    pfq,
    pochhammer_recurrence_check,
)

SUITES = ("theta", "moments", "thermal", "identities")
LN2 = math.log(2.0)


@dataclass
class SuiteConfig:
    """Grids and tolerances; every field can be overridden from a JSON file."""

    beta: list[float] = field(default_factory=lambda: [LN2, 1.0, 2.0])
    e0: list[float] = field(default_factory=lambda: [0.0, 0.5, 1.0, 2.0])
    C: list[float] = field(default_factory=lambda: [0.0, 0.25, 0.5, 1.0, 2.0, 3.0])
    S: list[float] = field(default_factory=lambda: [1.0, 2.0, 5.0])
    kummer_a: list[float] = field(default_factory=lambda: [0.5, 1.0, 2.0, 3.5])
    kummer_C: list[float] = field(default_factory=lambda: [0.0, 1.0, 2.0])
    ho1d_c: list[float] = field(default_factory=lambda: [0.0, 0.5, 1.0, 2.0, 3.0])
    beta_a: list[float] = field(default_factory=lambda: [0.5, 1.0, 2.5])
    theta_order: int = 30
    moment_n_max: int = 20
    resolution_order: int = 20
    thermal_n_max: int = 10
    product_order: int = 12
    stirling_n_max: int = 10
    husimi_x_max: float = 10.0
    husimi_steps: int = 41
    tol_series: float = 1e-12
    tol_theta: float = 1e-12
    tol_stirling: float = 1e-10
    tol_moments: float = 1e-8
    tol_resolution: float = 1e-7
    tol_ho1d: float = 1e-8
    tol_measure_integral: float = 1e-7
    tol_laplace: float = 1e-7
    tol_kummer: float = 1e-8
    tol_product: float = 1e-10
    tol_partition: float = 1e-12
    tol_density: float = 1e-13
    tol_p_moments: float = 1e-8
    tol_reconstruction: float = 1e-8
    tol_husimi_norm: float = 1e-6
    tol_husimi: float = 1e-10

    @classmethod
    def from_json(cls, path) -> "SuiteConfig":
        with open(path) as fh:
            data = json.load(fh)
        return cls().updated(data)

    def updated(self, overrides: dict) -> "SuiteConfig":
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise ConfigurationError(f"unknown configuration keys: {sorted(unknown)}")
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


def _safe(name: str, tag: str, fn: Callable[[], CaseRecord | Iterable[CaseRecord]]) -> list[CaseRecord]:
    """Run one case; numeric failures become failing records, config errors propagate."""
    try:
        out = fn()
    except ConfigurationError:
        raise
    except (GHGError, ArithmeticError) as exc:
        return [CaseRecord(name, tag, {}, math.nan, math.nan, math.inf, 0.0, note=f"{type(exc).__name__}: {exc}")]
    if isinstance(out, CaseRecord):
        return [out]
    return list(out)


# -- theta -------------------------------------------------------------------

THETA_PARAM_SETS = [
    HyperParams((), ()),
    HyperParams((1.0,), (2.0,)),
    HyperParams((1.0,), (2.5,)),
    HyperParams((0.5, 1.5), (2.2,)),
    HyperParams((1.2, 0.7), (3.1,)),
    HyperParams((2.0,), ()),
    HyperParams((0.3,), (1.7, 2.4)),
]

STIRLING_POLYS = {
    "x+x^3": [0, 1, 0, 1],
    "1-2x+3x^4": [1, -2, 0, 0, 3],
    "x^2": [0, 0, 1],
    "5-x^5+x^6": [5, 0, 0, 0, 0, -1, 1],
}


def theta_suite(cfg: SuiteConfig) -> list[CaseRecord]:
    out = []
    order = cfg.theta_order
    for params in THETA_PARAM_SETS:
        def ode(params=params):
            r = ts.hypergeometric_ode_residual(params, order)
            return CaseRecord(f"theta/ode/{params}", "hypergeometric-ode", {"params": str(params), "order": order},
                              r, 0.0, r, cfg.tol_theta)

        def rec(params=params):
            r = ts.theta_recurrence_check(params, order)
            return CaseRecord(f"theta/recurrence/{params}", "theta-recurrence", {"params": str(params), "order": order},
                              r, 0.0, r, cfg.tol_theta)

        out += _safe(f"theta/ode/{params}", "hypergeometric-ode", ode)
        out += _safe(f"theta/recurrence/{params}", "theta-recurrence", rec)
        if params.p:
            def literal(params=params):
                r = ts.hypergeometric_ode_residual(params, order, shift_first=False)
                return CaseRecord(f"theta/ode-upper-factor-before-shift/{params}", "hypergeometric-ode-ordering",
                                  {"params": str(params), "order": order}, r, 0.0, r, cfg.tol_theta,
                                  reported_only=True,
                                  note="upper-parameter factor applied before the shift by x; residual measured only")
            out += _safe(f"theta/ode-upper-factor-before-shift/{params}", "hypergeometric-ode-ordering", literal)

    dilations = [
        ("exp", HyperParams(), 30, LN2, 0.5),
        ("exp", HyperParams(), 30, 0.0, 0.7),
        ("1F1(1;2)", HyperParams((1.0,), (2.0,)), 40, -LN2, 1.0),
        ("1F1(1;2)", HyperParams((1.0,), (2.0,)), 40, 0.3, 0.8),
        ("2F1(0.5,1.5;2.2)", HyperParams((0.5, 1.5), (2.2,)), 200, -LN2, 0.4),
    ]
    for label, params, sorder, gamma, x0 in dilations:
        def dil(params=params, sorder=sorder, gamma=gamma, x0=x0, label=label):
            s = ts.series_from_pfq(params, sorder)
            r = ts.dilation_check(s, gamma, x0)
            scale = abs(s(x0 * math.exp(gamma)))
            return CaseRecord(f"theta/dilation/{label}/gamma={gamma:.6g},x0={x0:g}", "theta-exponential-dilation",
                              {"series": label, "order": sorder, "gamma": gamma, "x0": x0},
                              r, 0.0, r / scale, cfg.tol_theta)
        out += _safe(f"theta/dilation/{label}", "theta-exponential-dilation", dil)

    for label, coeffs in STIRLING_POLYS.items():
        poly = ts.FormalSeries.from_list(np.array(coeffs, dtype=float))
        for x0 in (0.5, 1.5):
            def stir(poly=poly, x0=x0, label=label):
                worst = max(ts.stirling_expansion_check(n, poly, x0) for n in range(cfg.stirling_n_max + 1))
                return CaseRecord(f"theta/stirling/{label}/x0={x0:g}", "theta-power-stirling",
                                  {"poly": label, "x0": x0, "n_max": cfg.stirling_n_max},
                                  worst, 0.0, worst, cfg.tol_stirling)
            out += _safe(f"theta/stirling/{label}", "theta-power-stirling", stir)
    return out


# -- moments -----------------------------------------------------------------

def _families(cfg: SuiteConfig):
    return [Exponential()] + [Beta(a) for a in cfg.beta_a] + [GammaLaguerre(e0) for e0 in cfg.e0]


def moments_suite(cfg: SuiteConfig) -> list[CaseRecord]:
    out = []
    spec = QuadratureSpec()
    for fam in _families(cfg):
        out += _safe(f"moments/{fam.label()}", "measure-moments",
                     lambda fam=fam: cs.moment_identity_check(fam, fam.params, cfg.moment_n_max, spec, cfg.tol_moments))

        def resolution(fam=fam):
            r = cs.identity_resolution_check(fam.params, fam, cfg.resolution_order, spec)
            return CaseRecord(f"resolution/{fam.label()}", "resolution-of-identity",
                              {"family": fam.label(), "order": cfg.resolution_order, "worst_n": r.worst_n},
                              r.diagonal[r.worst_n], 1.0, r.max_diag_error, cfg.tol_resolution,
                              note="off-diagonal entries vanish by the analytic angular integral")
        out += _safe(f"resolution/{fam.label()}", "resolution-of-identity", resolution)

    for a, n in [(2.0, 3), (0.5, 10), (1.0, 1), (-2.5, 7), (3.7, 40)]:
        ok = pochhammer_recurrence_check(a, n)
        out.append(CaseRecord(f"moments/pochhammer-recurrence/a={a:g},n={n}", "pochhammer-recurrence",
                              {"a": a, "n": n}, float(ok), 1.0, 0.0 if ok else math.inf, 0.0))
    return out


# -- thermal -----------------------------------------------------------------

def thermal_suite(cfg: SuiteConfig) -> list[CaseRecord]:
    out = []
    spec = QuadratureSpec()
    x_grid = np.linspace(0.0, cfg.husimi_x_max, cfg.husimi_steps)
    for beta in cfg.beta:
        base = th.density_diag(th.ThermalModel(beta, cs.LinearSpectrum(0.0)), cfg.thermal_n_max)
        for e0 in cfg.e0:
            model = th.ThermalModel(beta, cs.LinearSpectrum(e0))
            key = f"e0={e0:g},beta={beta:.6g}"
            q = model.q_factor

            def partition(model=model, key=key):
                z_series = math.exp(-model.beta * model.e0) * th._reduced_partition(model, 1e-17)
                z_closed = th.partition_closed_linear(model)
                return CaseRecord(f"thermal/partition/{key}", "partition-function",
                                  {"e0": model.e0, "beta": model.beta}, z_series, z_closed,
                                  abs(z_series - z_closed) / z_closed, cfg.tol_partition)
            out += _safe(f"thermal/partition/{key}", "partition-function", partition)

            def density(model=model, key=key, q=q):
                d = th.density_diag(model, cfg.thermal_n_max)
                geo = (1.0 - q) * q ** np.arange(d.size)
                err = float(np.max(np.abs(d - geo) / geo))
                return CaseRecord(f"thermal/density-geometric/{key}", "thermal-density-diagonal",
                                  {"e0": model.e0, "beta": model.beta}, float(d[-1]), float(geo[-1]), err,
                                  cfg.tol_density)
            out += _safe(f"thermal/density-geometric/{key}", "thermal-density-diagonal", density)

            def offset(model=model, key=key):
                d = th.density_diag(model, cfg.thermal_n_max)
                err = float(np.max(np.abs(d - base)))
                return CaseRecord(f"thermal/density-offset-independence/{key}", "thermal-density-offset",
                                  {"e0": model.e0, "beta": model.beta}, float(d[0]), float(base[0]), err,
                                  cfg.tol_density)
            out += _safe(f"thermal/density-offset-independence/{key}", "thermal-density-offset", offset)

            out += _safe(f"thermal/p-moments/{key}", "p-function-moments",
                         lambda model=model: th.p_moment_check(model, cfg.thermal_n_max, spec, cfg.tol_p_moments))

            for form in ("final", "unsimplified"):
                def recon(model=model, key=key, form=form):
                    r = th.density_reconstruction_check(model, cfg.thermal_n_max, spec, form)
                    reported = form == "final" and model.e0 != 0
                    note = ""
                    if reported:
                        note = (f"final P form reconstructs q^e0 (1-q) q^n; measured ratio "
                                f"{r.reconstructed[0] / r.expected[0]:.17g}, q^e0 = {model.q_factor ** model.e0:.17g}")
                    return CaseRecord(f"thermal/reconstruction-{form}/{key}", "diagonal-representation",
                                      {"e0": model.e0, "beta": model.beta, "form": form, "worst_n": r.worst_n},
                                      r.reconstructed[r.worst_n], r.expected[r.worst_n], r.max_error,
                                      cfg.tol_reconstruction, reported_only=reported, note=note)
                out += _safe(f"thermal/reconstruction-{form}/{key}", "diagonal-representation", recon)

            def husimi_norm(model=model, key=key):
                err = th.husimi_normalization_check(model, spec)
                return CaseRecord(f"thermal/husimi-normalization/{key}", "husimi-normalization",
                                  {"e0": model.e0, "beta": model.beta}, 1.0 + err, 1.0, err, cfg.tol_husimi_norm)
            out += _safe(f"thermal/husimi-normalization/{key}", "husimi-normalization", husimi_norm)

            def probe(model=model, key=key):
                pr = th.husimi_consistency_probe(model, x_grid)
                records = [CaseRecord(f"thermal/husimi-closed-vs-ratio/{key}", "husimi-closed-form",
                                      {"e0": model.e0, "beta": model.beta, "x_max": cfg.husimi_x_max},
                                      pr.max_rel_deviation, 0.0, pr.max_rel_deviation, cfg.tol_husimi,
                                      reported_only=not pr.asserted,
                                      note="" if pr.asserted else "closed Gaussian form is not exact for e0 > 0")]
                if not pr.asserted:
                    records.append(CaseRecord(
                        f"thermal/husimi-ratio-at-zero/{key}", "husimi-closed-form-offset",
                        {"e0": model.e0, "beta": model.beta}, pr.ratio_at_zero, pr.expected_ratio_at_zero,
                        abs(pr.ratio_at_zero - pr.expected_ratio_at_zero) / pr.expected_ratio_at_zero,
                        cfg.tol_husimi, reported_only=True,
                        note="ratio-form / closed-form at x = 0 equals q^e0"))
                return records
            out += _safe(f"thermal/husimi-closed-vs-ratio/{key}", "husimi-closed-form", probe)

        model = th.ThermalModel(beta)
        nbar, q = model.nbar, model.q_factor
        err = max(abs(q - nbar / (nbar + 1.0)), abs((1.0 - q) - 1.0 / (nbar + 1.0)))
        out.append(CaseRecord(f"thermal/occupation-algebra/beta={beta:.6g}", "bose-einstein-algebra",
                              {"beta": beta}, q, nbar / (nbar + 1.0), err, 1e-14))
    return out


# -- identities --------------------------------------------------------------

def _closed_form_cases(cfg: SuiteConfig) -> list[CaseRecord]:
    cases = []
    grids = {
        "0F0=exp": (HyperParams(), np.linspace(-5.0, 5.0, 21), np.exp),
        "1F0(0.5)=(1-x)^-0.5": (HyperParams((0.5,), ()), np.linspace(-0.9, 0.9, 19), lambda x: (1 - x) ** -0.5),
        "1F0(1)=1/(1-x)": (HyperParams((1.0,), ()), np.linspace(-0.9, 0.9, 19), lambda x: 1 / (1 - x)),
        "1F0(2.5)=(1-x)^-2.5": (HyperParams((2.5,), ()), np.linspace(-0.9, 0.9, 19), lambda x: (1 - x) ** -2.5),
        "1F1(1;2)=(e^x-1)/x": (HyperParams((1.0,), (2.0,)), np.linspace(-5.0, 5.0, 20),
                               lambda x: np.expm1(x) / x),
    }
    for label, (params, xs, exact) in grids.items():
        worst = max(xs, key=lambda x: abs(pfq(params, float(x)).value - exact(x)) / abs(exact(x)))
        value, ref = pfq(params, float(worst)).value, float(exact(worst))
        cases.append(CaseRecord(f"identities/closed-form/{label}", "series-closed-form",
                                {"x_worst": float(worst), "points": len(xs)}, value, ref,
                                abs(value - ref) / abs(ref), cfg.tol_series))
    return cases


LAPLACE_INNERS = [HyperParams(), HyperParams((), (1.0,)), HyperParams((), (2.0,)), HyperParams((0.5,), (1.5,))]
MEASURE_INNERS = [HyperParams(), HyperParams((), (1.0,)), HyperParams((0.7,), (1.3,))]
PRODUCT_SETS = [
    (HyperParams(), HyperParams(), 1.0),
    (HyperParams(), HyperParams(), -1.0),
    (HyperParams((1.0,), (2.0,)), HyperParams(), 0.5),
    (HyperParams((1.2, 0.7), (3.1,)), HyperParams((0.5,), (1.5,)), 0.3),
    (HyperParams((1.0,), (3.0,)), HyperParams(), -0.5),
    (HyperParams((2.0,), ()), HyperParams((), (1.0,)), 0.0),
]


def identities_suite(cfg: SuiteConfig) -> list[CaseRecord]:
    out = _closed_form_cases(cfg)
    spec = QuadratureSpec()
    for c in cfg.ho1d_c:
        out += _safe(f"identities/ho1d/c={c:g}", "ho1d-bessel-integral",
                     lambda c=c: ids.ho1d_integral_check(c, spec, cfg.tol_ho1d))

    for fam in _families(cfg):
        for inner in MEASURE_INNERS:
            for C in cfg.C:
                rhs_params = ids.general_integral_rhs_params(fam, inner)
                if abs(C) >= convergence_radius(rhs_params) * (1.0 - ids.RADIUS_MARGIN):
                    continue
                out += _safe(f"identities/measure-integral/{fam.label()}/{inner}/C={C:g}", "measure-integral",
                             lambda fam=fam, inner=inner, C=C:
                             ids.general_integral_check(fam, inner, C, spec, cfg.tol_measure_integral))

    for a in cfg.kummer_a:
        for C in cfg.kummer_C:
            def kummer(a=a, C=C):
                r = ids.kummer_integral_check(a, C, spec, cfg.tol_kummer)
                return [r.corrected, r.literal]
            out += _safe(f"identities/kummer/a={a:g},C={C:g}", "kummer-representation", kummer)

    for inner in LAPLACE_INNERS:
        for S in cfg.S:
            if inner.p == inner.q and S <= 1.0:
                continue
            out += _safe(f"identities/laplace/{inner}/S={S:g}", "laplace-transform",
                         lambda inner=inner, S=S: ids.laplace_transform_check(inner, S, spec, cfg.tol_laplace))

    for left, right, g in PRODUCT_SETS:
        def product(left=left, right=right, g=g):
            r = ids.product_formula_check(left, right, g, cfg.product_order)
            degenerate = bool(r.degenerate)
            return CaseRecord(f"identities/product-formula/{left}x{right}/g={g:g}", "hypergeometric-product",
                              {"left": str(left), "right": str(right), "g": g, "order": cfg.product_order,
                               "degenerate_m": list(r.degenerate)},
                              r.max_coeff_error, 0.0, r.max_coeff_error, cfg.tol_product, degenerate=degenerate)
        out += _safe(f"identities/product-formula/{left}x{right}/g={g:g}", "hypergeometric-product", product)

    x_grid = np.linspace(0.0, cfg.husimi_x_max, cfg.husimi_steps)
    for e0 in cfg.e0:
        for beta in cfg.beta:
            out += _safe(f"identities/product-chain/e0={e0:g},beta={beta:.6g}", "kummer-exponential-product",
                         lambda e0=e0, beta=beta: ids.kummer_exponential_chain_check(e0, beta, x_grid, cfg.tol_husimi))

    for params in (HyperParams((1.0,), (1.5,)), HyperParams((1.0,), (3.0,)), HyperParams((0.5,), (2.0,))):
        out += _safe(f"identities/angular-series/{params}", "angular-integral-series",
                     lambda params=params: ids.angular_series_check(params, [0.1, 0.5, 1.0, 3.0, 8.0], cfg.tol_series))
    return out


DRIVERS = {
    "theta": theta_suite,
    "moments": moments_suite,
    "thermal": thermal_suite,
    "identities": identities_suite,
}


def run_suite(name: str, cfg: SuiteConfig | None = None) -> VerifyReport:
    cfg = cfg or SuiteConfig()
    if name != "all" and name not in DRIVERS:
        raise ConfigurationError(f"unknown suite {name!r}")
    report = VerifyReport(name)
    for suite in (SUITES if name == "all" else (name,)):
        report.add(*DRIVERS[suite](cfg))
    return report
