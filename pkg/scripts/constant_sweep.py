#!/usr/bin/env python3
"""Trace the limit constant of the deep-minima count toward strong signal.

The expected number of deep minima near the predicted ground state tends
to a constant as the signal strength grows; this sweep evaluates that
constant on a logarithmic grid and reports how far the endpoint sits
from 1.

Usage:
    python scripts/constant_sweep.py [--p 3 --k 3] [--ceiling 1e3]
        [--points 25] [--out sweep.csv]
"""

from __future__ import annotations

import argparse

from spikeland import cli


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--p", type=int, default=3)
    parser.add_argument("--k", type=int, default=3)
    parser.add_argument("--ceiling", type=float, default=1e3)
    parser.add_argument("--points", type=int, default=25)
    parser.add_argument("--out", default=None,
                        help="CSV path (default: stdout)")
    args = parser.parse_args()
    argv = ["sweep-c", "--p", str(args.p), "--k", str(args.k),
            "--lam-max", str(args.ceiling), "--lam-points", str(args.points),
            "--format", "csv"]
    if args.out:
        argv += ["--output", args.out]
    return cli.main(argv)


if __name__ == "__main__":
    raise SystemExit(main())
