"""Tabulate how the closed Husimi and final P forms drift from exact values as e0 grows.

For each (e0, beta) this prints the series-ratio/closed-form Husimi ratio at
x = 0 next to q^e0, and the ratio of the diagonal rebuilt from each P form to
the exact thermal diagonal.

    python scripts/husimi_offset_probe.py --e0 0 0.5 1 2 --beta 0.6931 1 2
"""

import argparse
import math

from ghgcs.coherent_states import LinearSpectrum
from ghgcs.thermal import ThermalModel, density_reconstruction_check, husimi_consistency_probe


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--e0", type=float, nargs="+", default=[0.0, 0.5, 1.0, 2.0, 3.0])
    parser.add_argument("--beta", type=float, nargs="+", default=[math.log(2.0), 1.0, 2.0])
    parser.add_argument("--order", type=int, default=6)
    args = parser.parse_args()

    header = f"{'e0':>5} {'beta':>8} {'Q ratio(0)':>12} {'q^e0':>12} {'P final':>12} {'P unsimpl.':>12}"
    print(header)
    print("-" * len(header))
    for e0 in args.e0:
        for beta in args.beta:
            model = ThermalModel(beta, LinearSpectrum(e0))
            probe = husimi_consistency_probe(model, [0.0])
            final = density_reconstruction_check(model, args.order, form="final")
            full = density_reconstruction_check(model, args.order, form="unsimplified")
            final_ratio = final.reconstructed[0] / final.expected[0]
            full_ratio = full.reconstructed[0] / full.expected[0]
            print(f"{e0:>5g} {beta:>8.4f} {probe.ratio_at_zero:>12.9f} {probe.expected_ratio_at_zero:>12.9f} "
                  f"{final_ratio:>12.9f} {full_ratio:>12.9f}")


if __name__ == "__main__":
    main()
