#!/usr/bin/env python3
"""Compare the closed-form ground-state prediction against gradient descent
on sampled instances.

Samples landscapes at the requested dimension, runs multi-restart projected
gradient descent with retraction to the sphere on each, and reports the
mean energy per site and overlap next to the closed-form prediction.

Usage:
    python scripts/gse_simulate.py [--p 3 --k 2 --lam 10] [--n 64]
        [--instances 5] [--restarts 200] [--seed 2024] [--workers 4]
"""

from __future__ import annotations

import argparse

from spikeland import cli


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--p", type=int, default=3)
    parser.add_argument("--k", type=int, default=2)
    parser.add_argument("--lam", type=float, default=10.0)
    parser.add_argument("--n", type=int, default=64)
    parser.add_argument("--instances", type=int, default=5)
    parser.add_argument("--restarts", type=int, default=200)
    parser.add_argument("--seed", type=int, default=2024)
    parser.add_argument("--workers", type=int, default=None)
    args = parser.parse_args()
    argv = ["gse", "--p", str(args.p), "--k", str(args.k),
            "--lam", str(args.lam), "--simulate", "--n", str(args.n),
            "--samples", str(args.instances),
            "--restarts", str(args.restarts), "--seed", str(args.seed)]
    if args.workers is not None:
        argv += ["--workers", str(args.workers)]
    return cli.main(argv)


if __name__ == "__main__":
    raise SystemExit(main())
