"""Photon momentum correlation after the last thermal Thomson scattering.

Prints the normalised curve C(delta) and its fitted Gaussian width in
units of k_B T, for a few sampling ranges to show how the width depends
on the range.

    python3 scripts/run_thermal.py --temperature 3500
"""
import argparse
from concurrent.futures import ThreadPoolExecutor
import warnings

from wavepacket.correlations import FitQualityWarning, default_thermal_deltas, photon_correlation_curve


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--temperature", type=float, default=3500.0)
    ap.add_argument("--p1", type=float, default=0.0, help="electron momentum along the axis (k_B T)")
    ap.add_argument("--delta-max", type=float, nargs="+", default=[10.0, 14.0, 20.0])
    ap.add_argument("--n", type=int, default=57)
    ap.add_argument("--threads", type=int, default=4)
    args = ap.parse_args()

    with ThreadPoolExecutor(max_workers=args.threads) as pool:
        for dmax in args.delta_max:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", FitQualityWarning)
                curve = photon_correlation_curve(args.temperature, p1=(args.p1, 0.0, 0.0),
                                                 deltas=default_thermal_deltas(args.n, dmax), map_fn=pool.map)
            flag = " (fit estimates disagree)" if caught else ""
            print(f"delta_max = {dmax:5.1f}: width {curve.fitted_width:.4f} (moment), "
                  f"{curve.lsq_width:.4f} (least squares), residual {curve.fit_residual:.2e}{flag}")
        print("\n  delta      C")
        for d, c in zip(curve.delta_values, curve.c_values):
            print(f"{d:7.2f}  {c:.6e}")


if __name__ == "__main__":
    main()
