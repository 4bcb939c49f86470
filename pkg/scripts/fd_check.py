"""Compare the PCOH derivative of random analytic maps with forward differences."""

import argparse
import random
from fractions import Fraction

from cohdiff.pcoh.differential import finite_diff_check, random_analytic


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--h", type=float, default=1e-4)
    p.add_argument("--tol", type=float, default=1e-3)
    args = p.parse_args(argv)
    rng = random.Random(args.seed)
    web = (0, 1)
    worst, failures = 0.0, 0
    for _ in range(args.trials):
        t = random_analytic(rng, web, ("p", "q"), args.degree)
        x = {a: Fraction(rng.randint(0, 4), 10) for a in web}
        u = {a: Fraction(rng.randint(0, 4), 10) for a in web}
        v = finite_diff_check(t, web, x, u, args.h, args.tol)
        worst = max(worst, v.max_rel_err)
        failures += not v.ok
    print(f"{args.trials} trials, {failures} failures, worst relative error {worst:.2e}")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
