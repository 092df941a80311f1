"""Ratio of the sigma-side prime form to cal-E over random pairs, per curve."""

import argparse

import numpy as np

from cyclicsigma import random_curve, sigma_for
from cyclicsigma.verify import Context, sigma_prime_form_ratios, variant_ratios


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--curves", default="2,5;2,7;2,9;3,4")
    ap.add_argument("--pairs", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    for item in args.curves.split(";"):
        r, s = map(int, item.split(","))
        ctx = Context(sigma_for(random_curve(r, s, args.seed)))
        ratios = sigma_prime_form_ratios(ctx, rng, args.pairs)
        mean = complex(np.mean(ratios))
        print(f"({r},{s})  mean {mean:.12f}  max deviation {np.max(np.abs(ratios - mean)):.1e}")
        if r == 3:
            v = variant_ratios(ctx, rng, args.pairs)
            c = complex(np.mean(v))
            print(f"       variant/direct {c:.12f}  |c| = {abs(c):.12f}")


if __name__ == "__main__":
    main()
