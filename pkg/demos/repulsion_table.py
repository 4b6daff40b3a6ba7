"""Print the repulsion bound for a range of hypothetical exceptional zeros.

Run: python3 demos/repulsion_table.py --q 1000000000 --T 100
"""
import argparse
from fractions import Fraction

from zerorepulsion.bounds import from_preset_string, repulsion_bound, window


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, default=10**9)
    ap.add_argument("--T", type=int, default=100)
    ap.add_argument("--preset", default="convexity,bordignon")
    ap.add_argument("--steps", type=int, default=8)
    args = ap.parse_args()

    params = from_preset_string(args.preset)
    lo, hi = window(args.q, params)
    a, b = lo.to_fraction_bounds()[1], hi.to_fraction_bounds()[0]
    if a >= b:
        raise SystemExit(f"empty beta1 window for q={args.q}")
    # 1 - beta1 spaced geometrically between the window edges
    big, small = 1 - a, 1 - b
    print(f"{'1 - beta1':>14}  {'log M':>10}  {'beta bound':>14}  N<=M      vacuous")
    for k in range(1, args.steps + 1):
        omb = small * Fraction(float(big / small) ** (k / (args.steps + 1))).limit_denominator(10**12)
        r = repulsion_bound(args.q, args.T, 1 - omb, params)
        print(f"{float(omb):14.6e}  {float(r.log_M.mid()):10.2f}  {float(r.repulsion_beta.mid()):14.10f}  {r.n_le_m:9}  {r.vacuous}")


if __name__ == "__main__":
    main()
