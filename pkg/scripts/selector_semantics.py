"""Compare the three selector semantics on a random corpus.

Counts, per semantics, violations of delta-monotonicity and of the
near-start implication, and how often the verdicts differ.
"""

import argparse
from functools import partial

from shadowable import checks
from shadowable.catalog import random_corpus
from shadowable.decision import point_shadowable
from shadowable.metric import critical_distances

SEMANTICS = ("shared", "fixed", "free")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seed", type=int, default=20261015)
    ap.add_argument("--max-points", type=int, default=5)
    args = ap.parse_args()
    systems = random_corpus(args.count, args.seed, args.max_points)
    for sel in SEMANTICS:
        mono = checks.run_over(systems, partial(checks.check_monotone, selector=sel), "monotone")
        near = checks.run_over(systems, partial(checks.check_near_start, selector=sel), "near")
        print(f"{sel:6} monotone violations {len(mono.failures):5}   near-start violations {len(near.failures):5}")
    differ = total = 0
    for s in systems:
        g = critical_distances(s.space, s.generators)
        for x in range(s.n):
            for d in g:
                for e in g:
                    v = {sel: point_shadowable(s, x, d, e, selector=sel).shadowable for sel in SEMANTICS}
                    total += 1
                    differ += len(set(v.values())) > 1
    print(f"verdicts differ between semantics in {differ} of {total} queries")


if __name__ == "__main__":
    main()
