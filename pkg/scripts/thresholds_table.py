#!/usr/bin/env python3
"""Print the critical signal strengths for the standard (p, k) fixtures.

Reproduces the regression table: the onset of the preferred latitude
(lambda1), the onset of low-latitude nonpositivity at threshold (lambda2),
and the full trivialization threshold (lambda_tr).

Usage:
    python scripts/thresholds_table.py [--pairs 3:1,3:2,4:3,3:3]
"""

from __future__ import annotations

import argparse

from spikeland import thresholds_gse


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pairs", default="3:1,3:2,4:3,3:3",
                        help="comma-separated p:k pairs")
    args = parser.parse_args()
    pairs = []
    for tok in args.pairs.split(","):
        p_txt, _, k_txt = tok.partition(":")
        pairs.append((int(p_txt), int(k_txt)))
    print(f"{'p':>3} {'k':>3} {'lambda1':>12} {'lambda2':>12} "
          f"{'lambda_tr':>12} {'monotone':>9}")
    for p, k in pairs:
        rep = thresholds_gse.lambda_tr(p, k)
        print(f"{p:>3} {k:>3} {rep.lambda1:>12.7f} {rep.lambda2:>12.7f} "
              f"{rep.lambda_tr:>12.7f} {str(rep.monotonicity_verified):>9}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
