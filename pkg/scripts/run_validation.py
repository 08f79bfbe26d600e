#!/usr/bin/env python3
"""Run the Monte Carlo / identity validation suites.

Thin wrapper over ``spikeland validate``; exit code 1 when any suite
fails, so the script can gate CI jobs.

Usage:
    python scripts/run_validation.py [--suites rank1,census] [--seed 11]
        [--samples 20000]
"""

from __future__ import annotations

import argparse

from spikeland import cli


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--suites", default=None,
                        help="comma-separated subset (default: all)")
    parser.add_argument("--seed", type=int, default=11)
    parser.add_argument("--samples", type=int, default=None)
    args = parser.parse_args()
    argv = ["validate", "--seed", str(args.seed)]
    if args.suites:
        for name in args.suites.split(","):
            argv += ["--suite", name.strip()]
    if args.samples is not None:
        argv += ["--samples", str(args.samples)]
    return cli.main(argv)


if __name__ == "__main__":
    raise SystemExit(main())
