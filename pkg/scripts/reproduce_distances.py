"""Distance reports for the bundled APN functions in dimensions 1..8.

    python scripts/reproduce_distances.py --max-n 7 --json distances.json
"""

import argparse
import json
import time

from affdist.catalog import apn_catalog
from affdist.distance import distance_report


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=7)
    ap.add_argument("--long", action="store_true", help="also run the n=8 scans")
    ap.add_argument("--json", help="write all reports to this file")
    args = ap.parse_args()

    entries = [e for n in range(1, args.max_n + 1) for e in apn_catalog(n)]
    rows = []
    for e in entries:
        t0 = time.perf_counter()
        rep = distance_report(e.instantiate(), long=args.long)
        dt = time.perf_counter() - t0
        d = rep.exact if rep.exact is not None else f"[{rep.lower}, {rep.upper}]"
        print(f"n={e.n:<2} {e.name:<28} d={d!s:<12} {rep.method:<20} lmc={rep.lmc:<10} {dt:7.2f}s")
        rows.append(rep.to_dict())
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=1)


if __name__ == "__main__":
    main()
