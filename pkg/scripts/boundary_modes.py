"""Where does strict comparison change a verdict relative to closed comparison?

For each random system and grid pair, compares point_shadowable in the two
modes and tallies the four verdict combinations.
"""

import argparse
from collections import Counter

from shadowable.catalog import random_corpus
from shadowable.decision import point_shadowable
from shadowable.metric import critical_distances


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--max-points", type=int, default=5)
    args = ap.parse_args()
    tally = Counter()
    examples = []
    for s in random_corpus(args.count, args.seed, args.max_points):
        g = critical_distances(s.space, s.generators)
        for x in range(s.n):
            for d in g:
                for e in g:
                    a = point_shadowable(s, x, d, e, "closed").shadowable
                    b = point_shadowable(s, x, d, e, "open").shadowable
                    tally[(a, b)] += 1
                    if a != b and len(examples) < 5:
                        examples.append((s.name, s.space.labels[x], d, e, a, b))
    total = sum(tally.values())
    print(f"{total} queries over {args.count} systems")
    for (a, b), n in sorted(tally.items()):
        print(f"  closed={a!s:5} open={b!s:5}: {n}")
    for ex in examples:
        print("  e.g. %s x=%s delta=%s eps=%s closed=%s open=%s" % ex)


if __name__ == "__main__":
    main()
