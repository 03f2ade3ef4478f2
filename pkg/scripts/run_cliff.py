"""Uncertainty products of the step-scattered branches versus step depth.

    python3 scripts/run_cliff.py --n 40 --threads 4 --out cliff.csv
"""
import argparse
import csv
import math
import time

from wavepacket.scattering1d import KGrid, default_cliff_ratios, sweep_step_depth


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--n", type=int, default=40, help="number of depth ratios")
    ap.add_argument("--gamma", type=float, default=1.0)
    ap.add_argument("--k0-over-sigma", type=float, default=10.0)
    ap.add_argument("--n-k", type=int, default=257)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    grid = KGrid.from_packet(args.gamma, args.k0_over_sigma, n_points=args.n_k)
    t0 = time.perf_counter()
    table = sweep_step_depth(grid, default_cliff_ratios(args.n), threads=args.threads)
    elapsed = time.perf_counter() - t0

    print(f"{'V0/E0':>10} {'reflected':>12} {'transmitted':>12}   (units of hbar/2)")
    for r, pr, pt in table.rows:
        print(f"{r:10.4g} {pr:12.6f} {pt:12.6f}")
    finite = [pr for _, pr, _ in table.rows if math.isfinite(pr)]
    print(f"reflected range [{min(finite):.4f}, {max(finite):.4f}]; {elapsed:.1f} s")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(table.columns)
            w.writerows(table.rows)


if __name__ == "__main__":
    main()
