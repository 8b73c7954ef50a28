"""Reference curves used by the tests and the experiment scripts."""
from __future__ import annotations

from .parse import PolarCurve, parse_curve

# name -> (r(t), theta(t))
CURVES: dict[str, tuple[str, str]] = {
    "phi1": ("t/(1+t^2)", "t^2/(1+t^2)"),
    "phi2": ("t/(1+t^2)", "(t^2+14)/(1+t^2)"),
    "phi3": ("t^2/(t^2-11*t+30)", "(t^2+78)/(t^2+1)"),
    "phi4": ("t", "(t^2+14)/(t^2+1)"),
    "phi5": ("t^2/(t^2+1)", "t^3/(t^2+1)"),
    "phi6": ("t", "(t^3+1)/(t^2-3*t+2)"),
    "ex1": ("t", "t"),
    "ex2": ("t", "t^4/(t^2+1)"),
    "ex3": ("t/(t^2+1)", "t^2/(t^2+1)"),
    "ex4": ("1/t^2", "(t^3+t-1)/t"),
    "ex5": ("t", "t^2/(t^2+1)"),
}


def curve(name: str) -> PolarCurve:
    return parse_curve(*CURVES[name])
