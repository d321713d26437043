#!/usr/bin/env python3
"""Tabulate the stability-zone label over (beta, mu) grids at a few
gamma cuts, for rendering the three-dimensional zone diagram downstream.
"""

import argparse
import pathlib

from trichain.equilibria import zone
from trichain.map_core import Params


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-beta", type=int, default=120)
    ap.add_argument("--n-mu", type=int, default=160)
    ap.add_argument("--gammas", type=float, nargs="+", default=[5.2, 6.5, 7.3, 9.0])
    ap.add_argument("--out-dir", default="out")
    args = ap.parse_args()

    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    lines = ["gamma,beta,mu,zone"]
    for gamma in args.gammas:
        for i in range(args.n_beta):
            beta = 2.5 + (i + 0.5) * 2.5 / args.n_beta
            for j in range(args.n_mu):
                mu = (j + 0.5) * 4.0 / args.n_mu
                z = zone(Params(mu, beta, gamma))
                lines.append(f"{gamma!r},{beta!r},{mu!r},{z.value}")
        print(f"gamma={gamma} done")
    (out / "zone_atlas.csv").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
