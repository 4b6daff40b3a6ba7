"""Build Selberg weights for a real character and check the coefficient identity.

Run: python3 demos/sieve_weights.py --q 12 --chi1 0 --R 30
"""
import argparse

from zerorepulsion.analytic import fg_coefficient_identity
from zerorepulsion.characters import real_quadratic_characters
from zerorepulsion.multiplicative import ExceptionalContext
from zerorepulsion.sieve import build_weights, check_weights


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, default=12)
    ap.add_argument("--chi1", type=int, default=0)
    ap.add_argument("--R", type=int, default=30)
    ap.add_argument("--n-max", type=int, default=1000)
    args = ap.parse_args()

    ctx = ExceptionalContext(args.q, real_quadratic_characters(args.q)[args.chi1])
    system = build_weights(ctx, args.R)
    for d in sorted(system.theta):
        print(f"theta_{d:<4} = {system.theta[d]}")
    chk = check_weights(system)
    print(f"g1 = {chk.g1}  bound = {chk.rhs}  holds = {chk.holds}")
    report = fg_coefficient_identity(ctx, system, args.n_max)
    print(f"F*G coefficient identity: {report.checked} checks, {len(report.violations)} violations")


if __name__ == "__main__":
    main()
