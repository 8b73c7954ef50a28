#!/usr/bin/env python3
"""Analyze the reference curves and write every output format per curve.

    python3 scripts/run_golden.py --out runs/golden [--names phi3 phi6]
"""
from __future__ import annotations

import argparse
import time
import warnings
from pathlib import Path

from polares import AnalysisConfig, analyze
from polares.golden import CURVES, curve
from polares.io import build_report, emit, render_text, sample_plan


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", default="runs/golden")
    ap.add_argument("--names", nargs="*", default=list(CURVES))
    ap.add_argument("--budget", type=int, default=20000)
    args = ap.parse_args()
    cfg = AnalysisConfig(budget=args.budget)
    for name in args.names:
        c = curve(name)
        t0 = time.perf_counter()
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)
            an = analyze(c, cfg)
        t1 = time.perf_counter()
        arts = sample_plan(c, an.plan, cfg)
        report = build_report(an)
        emit(report, arts, "all", Path(args.out) / name)
        print(f"== {name}: r = {c.r}, theta = {c.theta}  "
              f"(analysis {t1 - t0:.2f}s, sampling {time.perf_counter() - t1:.2f}s, "
              f"{sum(a.t.size for a in arts)} samples)")
        print(render_text(report))


if __name__ == "__main__":
    main()
