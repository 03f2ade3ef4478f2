"""Uncertainty products of the well-scattered branches versus well width.

Widths run from 0 to ``width_max * delta_x1`` for each depth ratio.  SI
units by default (``delta_x1 = 8e-10 m``, electron mass).

    python3 scripts/run_well.py --threads 4 --out well.csv
"""
import argparse
import csv
import math
import time

import numpy as np

from wavepacket.constants import HBAR, M_ELECTRON
from wavepacket.scattering1d import KGrid, sweep_barrier_width


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--delta-x1", type=float, default=8e-10, help="incident position width (m)")
    ap.add_argument("--ratios", type=float, nargs="+", default=[0.5, 1.0, 1.5], help="V0 / E0")
    ap.add_argument("--n", type=int, default=40, help="widths per depth")
    ap.add_argument("--width-max", type=float, default=1.5)
    ap.add_argument("--k0-over-sigma", type=float, default=10.0)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    grid = KGrid.from_packet(args.delta_x1 * math.sqrt(2), args.k0_over_sigma, mass=M_ELECTRON, hbar=HBAR)
    widths = np.linspace(0.0, args.width_max * args.delta_x1, args.n)
    rows = []
    t0 = time.perf_counter()
    for ratio in args.ratios:
        table = sweep_barrier_width(grid, ratio * grid.e0, widths, threads=args.threads)
        rows += [(ratio, a, pr, pt) for a, pr, pt in table.rows]
    elapsed = time.perf_counter() - t0

    print(f"E0 = {grid.e0:.4e} J, k0 = {grid.k0:.4e} 1/m")
    print(f"{'V0/E0':>6} {'a/dx1':>8} {'reflected':>12} {'transmitted':>12}   (units of hbar/2)")
    for ratio, a, pr, pt in rows:
        print(f"{ratio:6.2f} {a / args.delta_x1:8.4f} {pr:12.6f} {pt:12.6f}")
    print(f"{elapsed:.1f} s")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(("v0_over_e0", "a", "product_reflected", "product_transmitted"))
            w.writerows(rows)


if __name__ == "__main__":
    main()
