"""Omega inside CR: the max(eps, modulus) resolution against eps + modulus."""

import argparse
import operator

from shadowable import checks
from shadowable.catalog import builtin_systems, random_corpus


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=11)
    ap.add_argument("--max-points", type=int, default=6)
    args = ap.parse_args()
    systems = builtin_systems() + random_corpus(args.count, args.seed, args.max_points)
    for label, bound in (("max", None), ("sum", operator.add)):
        res = checks.run_over(systems, lambda s: checks.check_inclusions(s, bound=bound), label)
        print(res.summary())
        for f in res.failures[:5]:
            print(f"  {f.system} point={f.point} eps={f.eps}: {f.detail}")


if __name__ == "__main__":
    main()
