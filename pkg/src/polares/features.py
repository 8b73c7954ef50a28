"""Limit circles, limit points, spiral branches and asymptotes."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import factorial

from .exactpoly import T, is_zero_at_root, isolate_real_roots, poly
from .parse import PolarCurve, RationalFunction
from .ratan import (
    INF,
    ExtendedValue,
    _as_box,
    _point_poly,
    compare_values,
    limit_at,
    order_at,
    rational_value,
    value_at,
)
from .selfint import InfinitudeVerdict, analyze_xi, close_selfintersections

KINDS = ("limit_circle", "limit_point", "spiral_branch", "asymptote")


@dataclass
class Feature:
    """Behaviour of the curve as t -> t0 from the listed sides.

    ``sides`` is a subset of ("-", "+") for finite t0 and empty at +-inf.
    """

    kind: str
    t0: object  # Fraction, RootBox or +-inf
    sides: tuple = ()
    r0: object = None  # limit circle radius (exact)
    r_sign: int = 0  # spiral branches: sign of the diverging radius
    alpha: object = None  # asymptote direction angle (exact)
    delta: object = None  # asymptote signed distance (exact)
    close_selfint: bool = False
    theta_signs: tuple = ()  # per side, direction in which theta diverges

    @property
    def t0_float(self) -> float:
        return float(self.t0)

    def line(self) -> str:
        """Cartesian form of an asymptote: -x sin(a) + y cos(a) = d."""
        if self.kind != "asymptote":
            raise ValueError("only asymptotes carry a line")
        a, d = _fmt_exact(self.alpha), _fmt_exact(self.delta)
        return f"-x*sin({a}) + y*cos({a}) = {d}"


def _fmt_exact(v) -> str:
    q = rational_value(v)
    if q is not None:
        return str(q)
    return f"{float(v):.15g}"


def _is_inf(t0) -> bool:
    return isinstance(t0, float) and math.isinf(t0)


def candidate_parameters(c: PolarCurve) -> list:
    """Real poles of r and theta, then -inf / +inf when a component
    diverges there."""
    boxes = isolate_real_roots(c.B, T) + isolate_real_roots(c.D, T)
    uniq = []
    for b in sorted(boxes, key=float):
        if not any(compare_values(b, u) == 0 for u in uniq):
            uniq.append(b)
    out = [b.exact if b.exact is not None else b for b in uniq]
    deg = lambda p: -1 if p.is_zero else p.degree()  # noqa: E731
    if deg(c.A) > deg(c.B) or deg(c.C) > deg(c.D):
        out = [-INF] + out + [INF]
    return out


def _sides_of(t0):
    return [None] if _is_inf(t0) else ["-", "+"]


def asymptote_delta(c: PolarCurve, t0, side: str | None, alpha) -> ExtendedValue:
    """lim r (theta - alpha) where r -> inf and theta -> alpha at t0."""
    q = rational_value(alpha) if not isinstance(alpha, Fraction) else alpha
    if q is not None:
        h = RationalFunction.make(c.A * (c.C - c.D * _sym(q)), c.B * c.D)
        return limit_at(h, t0, side).side(side or "+")
    # irrational algebraic t0: compare Taylor orders of r and theta - alpha
    box = _as_box(t0)
    qp = _point_poly(box)
    m = order_at(c.B, box)
    deriv = c.theta
    for j in range(1, m + 1):
        deriv = deriv.deriv()
        if not is_zero_at_root(deriv.num, box):
            if j < m:
                return ExtendedValue("+inf")  # sign is irrelevant here
            bt = c.B
            for _ in range(m):
                bt = bt.exquo(qp)
            lead = RationalFunction.make(c.A * deriv.num,
                                         bt * deriv.den * qp.diff(T) ** m * int(factorial(m)))
            return ExtendedValue("finite", value_at(lead, box))
    return ExtendedValue("finite", Fraction(0))


def _sym(q: Fraction):
    from sympy import Rational
    return Rational(q.numerator, q.denominator)


def _classify(c: PolarCurve, t0, side):
    lr, lt = limit_at(c.r, t0, side), limit_at(c.theta, t0, side)
    if lt.is_infinite:
        if lr.is_infinite:
            return ("spiral_branch", {"r_sign": 1 if lr.tag == "+inf" else -1})
        if lr.is_zero:
            return ("limit_point", {})
        return ("limit_circle", {"r0": lr.value})
    if lr.is_infinite:
        d = asymptote_delta(c, t0, side, lt.value)
        if d.is_finite:
            return ("asymptote", {"alpha": lt.value, "delta": d.value})
    return None


def _same(a, b) -> bool:
    if a[0] != b[0]:
        return False
    for key in set(a[1]) | set(b[1]):
        x, y = a[1].get(key), b[1].get(key)
        if isinstance(x, int) or isinstance(y, int):
            if x != y:
                return False
        elif (x is None) != (y is None) or (x is not None and compare_values(x, y) != 0):
            return False
    return True


def detect_features(c: PolarCurve, verdict: InfinitudeVerdict | None = None) -> list[Feature]:
    out: list[Feature] = []
    for t0 in candidate_parameters(c):
        found = []
        for side in _sides_of(t0):
            got = _classify(c, t0, side)
            if got is not None:
                found.append((side, got))
        if not found:
            continue
        if len(found) == 2 and _same(found[0][1], found[1][1]):
            found = [(("-", "+"), found[0][1])]
        for side, (kind, data) in found:
            sides = () if side is None else (side if isinstance(side, tuple) else (side,))
            f = Feature(kind, t0, sides, **data)
            if kind != "asymptote":
                f.theta_signs = tuple(
                    1 if limit_at(c.theta, t0, sd).tag == "+inf" else -1 for sd in (sides or (None,)))
            out.append(f)
    winding = [f for f in out if f.kind != "asymptote"]
    if winding:
        verdict = verdict or analyze_xi(c)
        for f in winding:
            f.close_selfint = close_selfintersections(c, f.t0, verdict)
    return out


def detect_asymptotes(c: PolarCurve) -> list[Feature]:
    return [f for f in detect_features(c, verdict=_NO_XI) if f.kind == "asymptote"]


# asymptotes never need the xi branch analysis
_NO_XI = InfinitudeVerdict(False, "not needed", {})


def generators(features: list[Feature], kind: str) -> list:
    """Distinct t0 values generating ``kind``, in increasing order."""
    vals = []
    for f in features:
        if f.kind == kind and not any(_eq_param(f.t0, v) for v in vals):
            vals.append(f.t0)
    return sorted(vals, key=float)


def _eq_param(a, b) -> bool:
    if _is_inf(a) or _is_inf(b):
        return a == b if (_is_inf(a) and _is_inf(b)) else False
    return compare_values(a, b) == 0
