#!/usr/bin/env python3
"""Sweep the complexity surface along the latitude axis at the predicted
ground-state energy, around the trivialization threshold.

The low-latitude maximum changes sign exactly at the threshold: positive
below it (exponentially many deep minima away from the spike), ~0 at it,
negative above it.  Default fixtures: (p, k) = (3, 3) at strengths just
below, at, and above the threshold.

Usage:
    python scripts/surface_sweep.py [--p 3 --k 3] [--lams 3.5,3.619,4.0]
        [--grid 201] [--out surface.csv]
"""

from __future__ import annotations

import argparse

from spikeland import cli


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--p", type=int, default=3)
    parser.add_argument("--k", type=int, default=3)
    parser.add_argument("--lams", default="3.5,3.619,4.0")
    parser.add_argument("--grid", type=int, default=201)
    parser.add_argument("--out", default=None,
                        help="CSV path (default: stdout)")
    args = parser.parse_args()
    argv = ["surface", "--p", str(args.p), "--k", str(args.k),
            "--lams", args.lams, "--m-grid", str(args.grid),
            "--format", "csv"]
    if args.out:
        argv += ["--output", args.out]
    return cli.main(argv)


if __name__ == "__main__":
    raise SystemExit(main())
