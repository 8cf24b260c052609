"""Greedy complete-Sidon census with automorphism orders per size class.

    python scripts/sidon_census.py --dim 8 --seeds 200 --per-size 3
"""

import argparse
from collections import Counter

from affdist.sidon import SidonSet, greedy_census, greedy_complete
from affdist.sidon_iso import aut_sidon


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dim", type=int, required=True)
    ap.add_argument("--seeds", type=int, default=200)
    ap.add_argument("--start", type=int, default=0)
    ap.add_argument("--per-size", type=int, default=3, help="sets per size whose group is computed")
    args = ap.parse_args()

    census = greedy_census(args.dim, args.seeds, start=args.start)
    for size in sorted(census):
        seeds = census[size]
        orders = Counter()
        for sd in seeds[: args.per_size]:
            orders[aut_sidon(greedy_complete(SidonSet(args.dim, ()), sd)).order] += 1
        print(f"size {size:>3}: {len(seeds):>5} sets  first seed {seeds[0]:<6} |Aut| {dict(orders)}")


if __name__ == "__main__":
    main()
