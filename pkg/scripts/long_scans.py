"""Absence certificates behind the LMC counterexamples at n = 8 and n = 9.

    python scripts/long_scans.py --out certs/
"""

import argparse
from pathlib import Path

from affdist.distance import gerbera_scan, lmc_value
from affdist.gf2 import FieldSpec
from affdist.vbf import vbf_from_power

RUNS = [(8, 3, 17), (8, 57, 17), (9, 3, 22)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", help="directory for certificate JSON files")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--checkpoint-dir", help="resume partial scans from here")
    args = ap.parse_args()
    out = Path(args.out) if args.out else None
    if out:
        out.mkdir(parents=True, exist_ok=True)

    for n, d, s in RUNS:
        f = vbf_from_power(FieldSpec(n), d)
        ckpt = Path(args.checkpoint_dir) / f"scan-n{n}-d{d}.json" if args.checkpoint_dir else None
        cert = gerbera_scan(f, s, threads=args.threads, checkpoint=ckpt)
        lb = cert.lower_bound
        print(
            f"n={n} x^{d}: {cert.conclusion}; {len(cert.centers)} centres, "
            f"{cert.configurations} configurations, {cert.wall_clock:.1f}s; "
            f"d >= {lb} (LMC {lmc_value(n, n):.2f})"
        )
        if out:
            cert.save(out / f"absence-n{n}-x{d}-s{s}.json")


if __name__ == "__main__":
    main()
