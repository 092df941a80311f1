"""Run the identity suite on several seeded random curves and write JSON reports."""

import argparse
import json
from pathlib import Path

from cyclicsigma import random_curve, run_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--curves", default="2,5;2,7;2,9;3,4")
    ap.add_argument("--curve-seed", type=int, default=0)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--outdir", default=None)
    args = ap.parse_args()
    for item in args.curves.split(";"):
        r, s = map(int, item.split(","))
        report = run_suite(random_curve(r, s, args.curve_seed), seed=args.seed)
        print(f"({r},{s})")
        for e in report.entries:
            print(f"  {'PASS' if e.passed else 'FAIL'}  {e.identity_id:30s} {e.max_rel_residual:.2e}")
        if args.outdir:
            out = Path(args.outdir)
            out.mkdir(parents=True, exist_ok=True)
            (out / f"verify_{r}_{s}.json").write_text(json.dumps(report.to_dict(), indent=2))


if __name__ == "__main__":
    main()
