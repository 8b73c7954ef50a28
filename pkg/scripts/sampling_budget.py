#!/usr/bin/env python3
"""How the sample count and resolution flag respond to the per-interval budget."""
from __future__ import annotations

import argparse
import warnings

from polares import AnalysisConfig, analyze
from polares.golden import curve
from polares.io import sample_plan


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("name", nargs="?", default="phi6")
    ap.add_argument("--budgets", type=int, nargs="*", default=[500, 2000, 5000, 20000])
    args = ap.parse_args()
    c = curve(args.name)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        an = analyze(c)
    print(f"{'budget':>7} {'samples':>8} {'under-resolved':>15} {'max |xy|':>9}")
    for b in args.budgets:
        arts = sample_plan(c, an.plan, AnalysisConfig(budget=b))
        n = sum(a.t.size for a in arts)
        under = sum(a.under_resolved for a in arts)
        norm = max(a.max_norm() for a in arts)
        print(f"{b:>7} {n:>8} {under:>8}/{len(arts):<6} {norm:>9.3f}")


if __name__ == "__main__":
    main()
