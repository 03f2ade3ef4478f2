"""Cross sections, mean free paths and coherence scales in a thermal plasma.

    python3 scripts/run_medium.py --temperature 3000 --coulomb-log 10
"""
import argparse

from wavepacket.medium import MediumSpec, analyse


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--temperature", type=float, default=3000.0)
    ap.add_argument("--coulomb-log", type=float, default=10.0)
    ap.add_argument("--n", type=float, default=4e17, help="electron and proton density (m^-3)")
    ap.add_argument("--n-gamma", type=float, default=4e26, help="photon density (m^-3)")
    ap.add_argument("--kinetic-factor", type=float, default=3.0, help="m v^2 = f k T")
    args = ap.parse_args()

    medium = MediumSpec(n_e=args.n, n_p=args.n, n_gamma=args.n_gamma, temperature=args.temperature,
                        coulomb_log=args.coulomb_log)
    rep = analyse(medium, args.kinetic_factor)
    print(f"electron speed        {rep.electron_speed:.4e} m/s")
    print(f"sigma Rutherford      {rep.sigma_rutherford:.4e} m^2")
    print(f"sigma Thomson         {rep.sigma_thomson:.4e} m^2")
    print(f"l Rutherford          {rep.l_rutherford:.4e} m")
    print(f"l Thomson             {rep.l_thomson:.4e} m")
    print(f"collisions / Thomson  {rep.n_collisions:.1f}")
    for name, c in (("Rutherford", rep.rutherford), ("Thomson", rep.thomson)):
        print(f"{name:10s} packet: gamma {c.gamma_packet:.3e} m, delta_p {c.delta_p:.3e} kg m/s, "
              f"delta_E {c.delta_e:.3e} J, tau {c.tau:.3e} s")


if __name__ == "__main__":
    main()
