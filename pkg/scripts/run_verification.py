#!/usr/bin/env python3
"""Sweep every registered inequality on dense grids and write JSON reports.

Exit code 0 means every check passed at the requested resolution; 1 means
at least one grid point violated its inequality (see the reports).
"""

import argparse
import time

from ddestab.verify import LEMMA_IDS, verify_all


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--resolution", type=int, default=256)
    ap.add_argument("--threads", type=int, default=None,
                    help="worker processes (default: DDE_STAB_THREADS or 1)")
    ap.add_argument("--out", default="artifacts/reports", help="report directory")
    args = ap.parse_args()

    t0 = time.perf_counter()
    reports = verify_all(
        resolution=args.resolution,
        threads=args.threads,
        out_dir=args.out,
        progress=print,
    )
    bad = sum(len(r.violations) for r in reports)
    dt = time.perf_counter() - t0
    print(f"{len(LEMMA_IDS)} checks, {bad} violations, {dt:.1f}s")
    return 0 if bad == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
