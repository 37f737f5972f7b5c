"""Largest shadowable grid delta per point, at every grid eps, for catalog systems.

    python scripts/threshold_sweep.py --out thresholds.csv
"""

import argparse
import csv
import sys

from shadowable.catalog import builtin_systems, prepend_system
from shadowable.decision import threshold_map
from shadowable.metric import critical_distances
from shadowable.skew import example_rotation_product


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", help="CSV path (default stdout)")
    ap.add_argument("--selector", default="shared", choices=["shared", "fixed", "free"])
    args = ap.parse_args()
    systems = builtin_systems() + [prepend_system(2, 4), example_rotation_product(4, 1, 2).system]
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["system", "eps", "point", "threshold_delta"])
    for s in systems:
        for e in critical_distances(s.space, s.generators):
            for x, d in threshold_map(s, e, selector=args.selector).items():
                w.writerow([s.name, str(e), s.space.labels[x], "" if d is None else str(d)])
    if args.out:
        fh.close()


if __name__ == "__main__":
    main()
