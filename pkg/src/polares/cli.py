"""Command line entry point: ``polares <r-expr> <theta-expr> [options]``."""
from __future__ import annotations

import argparse
import logging
import sys
import warnings
from fractions import Fraction

from .analysis import analyze
from .config import AnalysisConfig
from .exactpoly import PolyMisuseError
from .io.emit import FORMATS, emit
from .io.report import build_report, render_text, to_json
from .io.sampling import sample_plan
from .parse import CurveValidationError, ParseError, parse_curve
from .selfint import InternalContradiction

EXIT_OK, EXIT_INPUT, EXIT_CONTRADICTION = 0, 2, 3


def _positive_fraction(text: str) -> Fraction:
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="polares",
        description="Analyze and plot a curve given by rational polar functions r(t), theta(t).")
    ap.add_argument("r", help="r(t), e.g. 't^2/(t^2-11*t+30)'")
    ap.add_argument("theta", help="theta(t), e.g. '(t^2+78)/(t^2+1)'")
    ap.add_argument("--format", default="text", choices=FORMATS + ("all",),
                    help="output format (default: text)")
    ap.add_argument("--out", metavar="DIR",
                    help="output directory; text and json go to stdout when omitted")
    ap.add_argument("--rcap", type=_positive_fraction, default=Fraction(50),
                    help="radius cap for plotting (default 50)")
    ap.add_argument("--thetacap", type=_positive_fraction, default=Fraction(40),
                    help="angle cap in multiples of pi (default 40, i.e. 40*pi)")
    ap.add_argument("--kcap", type=int, default=3,
                    help="|k| solved for infinite families (default 3)")
    ap.add_argument("--precision", type=int, default=128,
                    help="starting bits for the pi enclosure (default 128)")
    ap.add_argument("--budget", type=_positive_int, default=20000,
                    help="sample budget per interval (default 20000)")
    ap.add_argument("--verify", action="store_true",
                    help="cross-check against the numeric oracle and print agreement")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    if args.kcap < 0:
        print("polares: --kcap must be non-negative", file=sys.stderr)
        return EXIT_INPUT
    if args.precision < 32:
        print("polares: --precision must be at least 32", file=sys.stderr)
        return EXIT_INPUT
    config = AnalysisConfig(rcap=args.rcap, thetacap_pi=args.thetacap, kcap=args.kcap,
                            precision=args.precision, budget=args.budget)
    try:
        curve = parse_curve(args.r, args.theta)
    except (ParseError, CurveValidationError) as exc:
        print(f"polares: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        with warnings.catch_warnings():
            # dropped intervals are reported in the output itself
            warnings.simplefilter("ignore", UserWarning)
            an = analyze(curve, config)
    except (InternalContradiction, PolyMisuseError) as exc:
        print(f"polares: internal contradiction: {exc}", file=sys.stderr)
        return EXIT_CONTRADICTION
    report = build_report(an)

    formats = list(FORMATS) if args.format == "all" else [args.format]
    needs_files = bool(set(formats) & {"svg", "csv"})
    if args.out is None and not needs_files:
        sys.stdout.write(render_text(report) if args.format == "text" else to_json(report))
    else:
        out = args.out or "polares_out"
        artifacts = sample_plan(curve, an.plan, config) if needs_files else []
        try:
            written = emit(report, artifacts, formats, out)
        except OSError as exc:
            print(f"polares: cannot write output: {exc}", file=sys.stderr)
            return EXIT_INPUT
        for p in written:
            print(p)
    if args.verify:
        from .oracle import cross_check
        for check in cross_check(an):
            print(check.line())
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
