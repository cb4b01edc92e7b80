#!/usr/bin/env python3
"""Emit the plot-ready figure CSVs (threshold curves, band boundaries, raster)."""

import argparse

from ddestab.verify import sweep_figures


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="artifacts/figures", help="output directory")
    ap.add_argument("--n-c", type=int, default=500, dest="n_c",
                    help="slope-magnitude samples for the threshold comparison")
    ap.add_argument("--n-mu", type=int, default=199, dest="n_mu",
                    help="mu samples for the boundary curves")
    ap.add_argument("--raster", type=int, default=200,
                    help="cells per axis in the region raster")
    args = ap.parse_args()
    paths = sweep_figures(args.out, n_c=args.n_c, n_mu=args.n_mu, raster=args.raster)
    for name in sorted(paths):
        print(f"{name}: {paths[name]}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
