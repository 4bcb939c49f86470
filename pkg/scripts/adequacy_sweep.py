"""Adequacy verdicts for random closed Nat programs over a budget schedule."""

import argparse
from collections import Counter

from cohdiff.generators import GenConfig, random_program
from cohdiff.pcoh.adequacy import adequacy_check, parse_schedule
from cohdiff.syntax import NAT, render


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--programs", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--schedule", default="default")
    p.add_argument("--fuel", type=int, default=10_000)
    args = p.parse_args(argv)
    schedule = parse_schedule(args.schedule)
    tally: Counter = Counter()
    for i in range(args.programs):
        m = random_program(args.seed + i, GenConfig(max_depth=args.depth), ty=NAT)
        v = adequacy_check(m, schedule, args.fuel)
        tally[v.status] += 1
        if v.status == "contradiction":
            print(f"seed {args.seed + i}: {render(m)}\n  {v.message}")
    for status, n in sorted(tally.items()):
        print(f"{status:20s} {n}")
    return 1 if tally["contradiction"] else 0


if __name__ == "__main__":
    raise SystemExit(main())
