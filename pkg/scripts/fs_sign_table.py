"""Measure the sign in the hyperelliptic Frobenius-Stickelberger relation.

For each genus and n, prints sigma-side / determinant-side on a few random
configurations next to the sign implemented in ``fsh_sign``.
"""

import argparse

import numpy as np

from cyclicsigma import random_curve, sigma_for
from cyclicsigma.verify import Context, fs_sides, fsh_sign


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--genera", default="1,2,3,4")
    ap.add_argument("--nmax", type=int, default=6)
    ap.add_argument("--trials", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print("g  n  measured  implemented  spread")
    for g in map(int, args.genera.split(",")):
        ctx = Context(sigma_for(random_curve(2, 2 * g + 1, args.seed + g)))
        for n in range(2, args.nmax + 1):
            ratios = []
            for _ in range(args.trials):
                lhs, det = fs_sides(ctx.ev, ctx.points(rng, n, radius=0.9))
                ratios.append(lhs / det)
            r = np.mean(ratios)
            spread = max(abs(x - r) for x in ratios)
            print(f"{g}  {n}  {r.real:+.6f}  {fsh_sign(g, n):+d}           {spread:.1e}")


if __name__ == "__main__":
    main()
