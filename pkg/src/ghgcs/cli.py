"""Command-line front end.

Exit codes: 0 success, 1 numeric failure or failing verification case,
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from contextlib import contextmanager

import numpy as np

from . import __version__
from .coherent_states import NORM_TAIL_TARGET, LinearSpectrum, cs_amplitudes
from .errors import ConfigurationError, GHGError
from .report import _fmt
from .special_functions import (
    Beta,
    Exponential,
    GammaLaguerre,
    HyperParams,
    pfq,
    radius_estimate,
    weight_eval,
)
from .suites import SUITES, SuiteConfig, run_suite
from .thermal import ThermalModel, husimi_q_closed_linear, husimi_q_ratio, p_function_linear

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

THERMAL_FORMULAS = {
    "husimi-ratio": "Q(x) = sum_n exp(-beta e(n)) x^n / rho(n) / (Z N(x)); valid for every e0",
    "husimi-closed": "Q(x) = exp((q-1) x) / Z with q = exp(-beta); exact for e0 = 0 only",
    "p-function": "P(x) = (1/nbar) exp(-x/nbar), nbar = 1/(exp(beta)-1)",
}


class UsageError(Exception):
    pass


def _num(v: float) -> str:
    """Shortest round-trip representation."""
    return repr(float(v))


def _params(args) -> HyperParams:
    return HyperParams(tuple(args.a or ()), tuple(args.b or ()))


@contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


# -- eval --------------------------------------------------------------------

def _weight_family(name: str, param: float | None):
    if name == "exponential":
        return Exponential()
    if param is None:
        raise UsageError(f"--param is required for the {name} family")
    if name == "beta":
        return Beta(param)
    return GammaLaguerre(param)


def cmd_eval(args) -> int:
    kind = args.kind
    if kind == "pfq":
        if args.x is None:
            raise UsageError("eval pfq needs --x")
        res = pfq(_params(args), args.x, tol=args.tol)
        print(_num(res.value))
        print(f"terms_used={res.terms_used}")
        print(f"tail_estimate={_num(res.tail_estimate)}")
        for w in res.warnings:
            print(f"warning: {w}", file=sys.stderr)
        return EXIT_OK
    if kind == "radius":
        params = _params(args)
        est = radius_estimate(params)
        print(_num(est.value))
        if math.isfinite(est.value):
            print(f"last_delta={_num(est.last_delta)}")
            print(f"ratio_literal={_num(est.literal_value)}")
        return EXIT_OK
    if kind == "weight":
        if args.x is None:
            raise UsageError("eval weight needs --x")
        fam = _weight_family(args.family, args.param)
        print(_num(weight_eval(fam, args.x)))
        print(f"family={fam.label()}")
        return EXIT_OK
    raise UsageError(f"unknown eval kind {kind!r}")


def cmd_radius(args) -> int:
    args.kind = "radius"
    return cmd_eval(args)


# -- cs ----------------------------------------------------------------------

def cmd_cs(args) -> int:
    params = _params(args)
    z = complex(args.z_re, args.z_im)
    state = cs_amplitudes(params, z, args.order)
    rows = range(1) if z == 0 else range(state.order + 1)
    flagged = state.norm_defect > args.defect_threshold
    footer = {
        "norm_defect": _fmt(state.norm_defect),
        "defect_threshold": _fmt(args.defect_threshold),
        "truncation_flag": "order-too-small" if flagged else "ok",
    }
    with _output(args.out) as fh:
        if args.format == "json":
            doc = {
                "params": str(params), "z": _fmt(z), "order": state.order,
                "rows": [{"n": n, "amplitude": _fmt(complex(state.amps[n])),
                          "probability": _fmt(float(state.probabilities[n]))} for n in rows],
                **footer,
            }
            fh.write(json.dumps(doc, indent=2) + "\n")
        else:
            fh.write(f"# params={params} z_re={_num(z.real)} z_im={_num(z.imag)} order={state.order}\n")
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["n", "amp_re", "amp_im", "probability"])
            for n in rows:
                a = complex(state.amps[n])
                writer.writerow([n, _fmt(a.real), _fmt(a.imag), _fmt(float(state.probabilities[n]))])
            fh.write("# " + " ".join(f"{k}={v}" for k, v in footer.items()) + "\n")
    if flagged:
        print(f"warning: norm_defect {state.norm_defect:.3g} exceeds {args.defect_threshold:g}; "
              f"increase --order", file=sys.stderr)
    return EXIT_OK


# -- thermal -----------------------------------------------------------------

def cmd_thermal(args) -> int:
    if args.steps < 2:
        raise UsageError("--steps must be >= 2")
    if not (0.0 <= args.x_min < args.x_max) or not math.isfinite(args.x_max):
        raise UsageError("need 0 <= x-min < x-max < inf")
    if not args.beta > 0:
        raise UsageError("--beta must be > 0")
    model = ThermalModel(args.beta, LinearSpectrum(args.e0))
    which = args.which
    if which == "husimi-ratio":
        fn = lambda x: husimi_q_ratio(model, None, x)
    elif which == "husimi-closed":
        fn = lambda x: husimi_q_closed_linear(model, x)
        if model.e0 != 0:
            print("warning: the closed Husimi form is not exact for e0 > 0", file=sys.stderr)
    else:
        fn = lambda x: p_function_linear(model, x, args.form)
    xs = np.linspace(args.x_min, args.x_max, args.steps)
    formula = THERMAL_FORMULAS[which]
    if which == "p-function" and args.form == "unsimplified":
        formula = "P(x) = (exp(beta)-1) exp(beta e0) exp(-(exp(beta)-1) x)"
    with _output(args.out) as fh:
        fh.write(f"# which={which} e0={_num(model.e0)} beta={_num(model.beta)} "
                 f"q={_num(model.q_factor)} nbar={_num(model.nbar)} tool_version={__version__}\n")
        fh.write(f"# formula: {formula}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", which])
        for x in xs:
            writer.writerow([_fmt(float(x)), _fmt(fn(float(x)))])
    return EXIT_OK


# -- verify ------------------------------------------------------------------

def _suite_config(args) -> SuiteConfig:
    cfg = SuiteConfig.from_json(args.config) if args.config else SuiteConfig()
    overrides = {"e0": args.e0_grid, "beta": args.beta_grid}
    if args.order is not None:
        overrides["theta_order"] = args.order
    return cfg.updated(overrides)


def cmd_verify(args) -> int:
    try:
        cfg = _suite_config(args)
    except (OSError, json.JSONDecodeError, TypeError) as exc:
        raise ConfigurationError(f"cannot read configuration: {exc}") from exc
    report = run_suite(args.suite, cfg)
    text = report.to_json() if args.format == "json" else report.to_csv()
    with _output(args.out) as fh:
        fh.write(text)
    summary = report.summary()
    print(" ".join(f"{k}={v}" for k, v in summary.items()), file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_FAIL


# -- parser ------------------------------------------------------------------

def _add_params(p):
    p.add_argument("--a", type=float, action="append", help="upper parameter (repeatable)")
    p.add_argument("--b", type=float, action="append", help="lower parameter (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ghgcs", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate pFq, its convergence radius or a weight")
    ev.add_argument("kind", choices=["pfq", "radius", "weight"])
    _add_params(ev)
    ev.add_argument("--x", type=float)
    ev.add_argument("--tol", type=float, default=1e-16)
    ev.add_argument("--family", choices=["exponential", "beta", "gamma-laguerre"], default="exponential")
    ev.add_argument("--param", type=float, help="a for beta, e0 for gamma-laguerre")
    ev.set_defaults(func=cmd_eval)

    rad = sub.add_parser("radius", help="alias of 'eval radius'")
    _add_params(rad)
    rad.set_defaults(func=cmd_radius, x=None, tol=1e-16)

    c = sub.add_parser("cs", help="coherent-state Fock amplitudes")
    _add_params(c)
    c.add_argument("--z-re", type=float, default=0.0)
    c.add_argument("--z-im", type=float, default=0.0)
    c.add_argument("--order", type=int, default=64)
    c.add_argument("--defect-threshold", type=float, default=NORM_TAIL_TARGET)
    c.add_argument("--format", choices=["csv", "json"], default="csv")
    c.add_argument("--out")
    c.set_defaults(func=cmd_cs)

    t = sub.add_parser("thermal", help="Husimi or P-function grid for the linear spectrum")
    t.add_argument("--which", choices=list(THERMAL_FORMULAS), default="husimi-ratio")
    t.add_argument("--e0", type=float, default=0.0)
    t.add_argument("--beta", type=float, default=math.log(2.0))
    t.add_argument("--x-min", type=float, default=0.0)
    t.add_argument("--x-max", type=float, default=10.0)
    t.add_argument("--steps", type=int, default=101)
    t.add_argument("--form", choices=["final", "unsimplified"], default="final")
    t.add_argument("--out")
    t.set_defaults(func=cmd_thermal)

    v = sub.add_parser("verify", help="run verification suites and write a report")
    v.add_argument("--suite", choices=list(SUITES) + ["all"], default="all")
    v.add_argument("--format", choices=["json", "csv"], default="json")
    v.add_argument("--out")
    v.add_argument("--config", help="JSON file with grids and tolerances")
    v.add_argument("--e0", dest="e0_grid", type=float, action="append", help="override the e0 grid (repeatable)")
    v.add_argument("--beta", dest="beta_grid", type=float, action="append", help="override the beta grid (repeatable)")
    v.add_argument("--order", type=int, help="override the theta-suite series order")
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArithmeticError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ValueError, GHGError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
