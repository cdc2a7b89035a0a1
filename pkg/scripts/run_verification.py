"""Run every verification suite and write one JSON report per suite.

    python scripts/run_verification.py --outdir results
"""

import argparse
import pathlib
import sys

from ghgcs.suites import SUITES, SuiteConfig, run_suite


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--outdir", default="results")
    parser.add_argument("--config", help="JSON file with grids and tolerances")
    args = parser.parse_args()

    cfg = SuiteConfig.from_json(args.config) if args.config else SuiteConfig()
    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    all_ok = True
    for name in SUITES:
        report = run_suite(name, cfg)
        path = outdir / f"{name}.json"
        path.write_text(report.to_json())
        s = report.summary()
        print(f"{name:<11} pass={s['pass']:<4} fail={s['fail']:<3} reported-only={s['reported-only']:<3} -> {path}")
        for case in report.sorted_cases():
            if case.status.value == "fail":
                print(f"  FAIL {case.name}: error {case.error:.3g} > {case.tolerance:.3g} {case.note}")
        all_ok &= report.ok
    return 0 if all_ok else 1


if __name__ == "__main__":
    sys.exit(main())
