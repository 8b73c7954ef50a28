#!/usr/bin/env python3
"""Cross-check the exact analysis against the numeric oracle on every reference curve."""
from __future__ import annotations

import argparse
import sys
import warnings

from polares import OracleConfig, analyze
from polares.golden import CURVES, curve
from polares.oracle import cross_check


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--range", type=float, default=50.0, help="oracle samples t in [-R, R]")
    ap.add_argument("--samples", type=int, default=20000)
    args = ap.parse_args()
    cfg = OracleConfig(samples=args.samples)
    failures = 0
    for name in CURVES:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)
            an = analyze(curve(name))
        print(f"== {name}")
        for check in cross_check(an, cfg, (-args.range, args.range)):
            print("  " + check.line())
            failures += not check.ok
    print(f"{failures} disagreement(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
