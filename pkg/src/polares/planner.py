"""Plot planning: case analysis, marker sets and colored parameter intervals."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .exactpoly import P, T, RootBox, isolate_real_roots, pi_enclosure, poly
from .features import Feature, generators
from .parse import PolarCurve
from .ratan import INF, bounded_on_reals, compare_values, global_extrema, negate_value

CASES = ("both_bounded", "theta_bounded_r_unbounded", "r_bounded_theta_unbounded", "both_unbounded")
BORDERED = frozenset({"asymptote", "limit_circle", "spiral_branch"})


def classify_case(c: PolarCurve) -> str:
    rb, tb = bounded_on_reals(c.r), bounded_on_reals(c.theta)
    if rb and tb:
        return "both_bounded"
    if tb:
        return "theta_bounded_r_unbounded"
    if rb:
        return "r_bounded_theta_unbounded"
    return "both_unbounded"


@dataclass
class Marker:
    value: object  # Fraction, RootBox or +-inf
    provenance: tuple

    @property
    def is_infinite(self) -> bool:
        return isinstance(self.value, float) and math.isinf(self.value)

    def __float__(self):
        return float(self.value)


def _eq(a, b) -> bool:
    ai = isinstance(a, float) and math.isinf(a)
    bi = isinstance(b, float) and math.isinf(b)
    if ai or bi:
        return ai and bi and a == b
    return compare_values(a, b) == 0


def _add(markers: list[Marker], value, tag: str):
    if isinstance(value, RootBox) and value.exact is not None:
        value = value.exact
    for m in markers:
        if _eq(m.value, value):
            if tag not in m.provenance:
                m.provenance = m.provenance + (tag,)
            return
    markers.append(Marker(value, (tag,)))


def _r_zeros(c: PolarCurve) -> list:
    return [] if c.A.degree() <= 0 else isolate_real_roots(c.A, T)


def _enclose(v, bits: int) -> tuple[Fraction, Fraction]:
    if isinstance(v, Fraction):
        return v, v
    if v.exact is not None:
        return v.exact, v.exact
    iv = v.refine(Fraction(1, 2**bits)).as_interval()
    return iv.lo, iv.hi


def theta_within_two_pi(c: PolarCurve) -> bool:
    """|theta(t)| < 2 pi for every real t (theta bounded).

    sup and inf are algebraic and 2 pi is not, so refining always decides.
    """
    e = global_extrema(c.theta)
    bits = 64
    while True:
        two_pi = pi_enclosure(bits + 64).interval * Fraction(2)
        s_lo, s_hi = _enclose(e.sup.value, bits)
        i_lo, i_hi = _enclose(e.inf.value, bits)
        if s_lo > two_pi.hi or i_hi < -two_pi.hi:
            return False
        if s_hi < two_pi.lo and i_lo > -two_pi.lo:
            return True
        bits *= 2


def argmax_abs_r(c: PolarCurve) -> list:
    """Parameters where |r| attains its (bounded) global maximum."""
    e = global_extrema(c.r)
    top, bot = e.sup.value, negate_value(e.inf.value)
    cmp = compare_values(top, bot)
    pts = []
    if cmp >= 0:
        pts += e.sup_at
    if cmp <= 0:
        pts += e.inf_at
    return pts


def marker_set(c: PolarCurve, features: list[Feature], case: str) -> list[Marker]:
    markers: list[Marker] = []
    if case == "both_bounded":
        return markers
    gen = lambda kind: generators(features, kind)  # noqa: E731
    if case == "theta_bounded_r_unbounded":
        for t in gen("asymptote"):
            _add(markers, t, "asymptote")
        for t in _r_zeros(c):
            _add(markers, t, "r_zero")
        if theta_within_two_pi(c):
            e = global_extrema(c.theta)
            for t in e.sup_at + e.inf_at:
                _add(markers, t, "theta_extremum")
    elif case == "r_bounded_theta_unbounded":
        for t in gen("limit_circle"):
            _add(markers, t, "limit_circle")
        for t in gen("limit_point"):
            _add(markers, t, "limit_point")
        for t in _r_zeros(c):
            _add(markers, t, "r_zero")
        for t in argmax_abs_r(c):
            _add(markers, t, "r_max")
    else:
        for kind in ("limit_circle", "limit_point", "spiral_branch", "asymptote"):
            for t in gen(kind):
                _add(markers, t, kind)
        for t in _r_zeros(c):
            _add(markers, t, "r_zero")
    markers.sort(key=float)
    return markers


# ---------------------------------------------------------------------------
# intervals


@dataclass
class PlotInterval:
    a: object  # Fraction, exact marker value, or +-inf
    b: object
    color: str  # "red" | "blue" | "neutral"
    a_marker: Marker | None = None
    b_marker: Marker | None = None
    bordered: tuple = (False, False)
    caps_ok: bool = True

    @property
    def bounds(self) -> tuple[float, float]:
        return float(self.a), float(self.b)

    @property
    def full_line(self) -> bool:
        return (isinstance(self.a, float) and self.a == -INF) and (isinstance(self.b, float) and self.b == INF)


@dataclass
class PlotPlan:
    case: str
    markers: list[Marker]
    intervals: list[PlotInterval]
    infinity_generates: bool = False
    warnings: list = field(default_factory=list)

    def display_markers(self) -> list[Marker]:
        """Markers as listed in the report: +-inf are always shown when
        intervals are built around finite markers."""
        if not self.markers or self.infinity_generates:
            return list(self.markers)
        return [Marker(-INF, ("infinity",))] + list(self.markers) + [Marker(INF, ("infinity",))]


def _approx(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if v.exact is not None:
        return v.exact
    return v.refine(Fraction(1, 2**60)).as_interval().mid


def build_intervals(markers: list[Marker]) -> tuple[list[PlotInterval], bool]:
    """Colored intervals around the finite markers.

    Returns the intervals and whether +-inf are genuine generators (both
    present among the markers), which selects the +-10 windows.
    """
    finite = [m for m in markers if not m.is_infinite]
    infinite = {m.value for m in markers if m.is_infinite}
    at_inf = infinite == {INF, -INF}
    out: list[PlotInterval] = []
    if not finite:
        return [PlotInterval(Fraction(-10), Fraction(10), "neutral")], at_inf
    xs = [_approx(m.value) for m in finite]
    n = len(finite)
    if n == 1 or at_inf:
        left_w, right_w = Fraction(10), Fraction(10)
    else:
        # symmetric window: reflect the inner midpoint about the extreme marker
        left_w, right_w = (xs[1] - xs[0]) / 2, (xs[-1] - xs[-2]) / 2
    out.append(PlotInterval(xs[0] - 2 * left_w, xs[0] - left_w, "neutral"))
    for i, m in enumerate(finite):
        lo = xs[0] - left_w if i == 0 else (xs[i - 1] + xs[i]) / 2
        hi = xs[-1] + right_w if i == n - 1 else (xs[i] + xs[i + 1]) / 2
        out.append(PlotInterval(lo, m.value, "red", None, m))
        out.append(PlotInterval(m.value, hi, "blue", m, None))
    out.append(PlotInterval(xs[-1] + right_w, xs[-1] + 2 * right_w, "neutral"))
    return out, at_inf


def full_line_plan(case: str) -> PlotPlan:
    return PlotPlan(case, [], [PlotInterval(-INF, INF, "neutral")])


def plan(c: PolarCurve, features: list[Feature], case: str | None = None) -> PlotPlan:
    case = case or classify_case(c)
    if case == "both_bounded":
        return full_line_plan(case)
    if case == "theta_bounded_r_unbounded" and not generators(features, "asymptote"):
        return full_line_plan(case)
    markers = marker_set(c, features, case)
    intervals, at_inf = build_intervals(markers)
    return PlotPlan(case, markers, intervals, at_inf)


# ---------------------------------------------------------------------------
# bordering


def _is_feature_endpoint(m: Marker | None) -> bool:
    return m is not None and bool(BORDERED & set(m.provenance))


def _cap_polys(c: PolarCurve, rcap: Fraction, thetacap_pi: Fraction):
    from sympy import Rational
    rc = Rational(rcap.numerator, rcap.denominator)
    tc = Rational(thetacap_pi.numerator, thetacap_pi.denominator) * P
    A, B, C, D = (x.as_expr() for x in (c.A, c.B, c.C, c.D))
    return [poly(A - rc * B, T), poly(A + rc * B, T), poly(C - tc * D, T, P), poly(C + tc * D, T, P)]


def _crossings(c: PolarCurve, rcap, thetacap_pi) -> list[RootBox]:
    boxes = []
    for f in _cap_polys(c, rcap, thetacap_pi):
        if not f.is_zero and f.degree(T) > 0:
            boxes += isolate_real_roots(f, T)
    boxes = [b.refine(Fraction(1, 2**40)) for b in boxes]
    return sorted(boxes, key=lambda b: b.lo)


def within_caps(c: PolarCurve, t: Fraction, rcap: Fraction, thetacap_pi: Fraction) -> bool:
    try:
        r, th = c.r(t), c.theta(t)
    except ZeroDivisionError:
        return False
    pi = pi_enclosure().interval
    return abs(r) <= rcap and Fraction(abs(th)) < thetacap_pi * pi.lo


def _gap_points(lo, hi) -> Fraction:
    if lo == -INF and hi == INF:
        return Fraction(0)
    if lo == -INF:
        return Fraction(hi) - 1
    if hi == INF:
        return Fraction(lo) + 1
    return (Fraction(lo) + Fraction(hi)) / 2


def border_interval(iv: PlotInterval, c: PolarCurve, rcap: Fraction, thetacap_pi: Fraction,
                    crossings: list[RootBox]) -> PlotInterval | None:
    """Pull feature-tagged (and infinite) endpoints back to where the curve
    re-enters the caps for the last time."""
    move_a = _is_feature_endpoint(iv.a_marker) or iv.a == -INF
    move_b = _is_feature_endpoint(iv.b_marker) or iv.b == INF
    a, b = (iv.a if iv.a == -INF else _approx(iv.a)), (iv.b if iv.b == INF else _approx(iv.b))
    inside = [x for x in crossings if (a == -INF or x.lo > a) and (b == INF or x.hi < b)]
    # cut points separate gaps where the caps hold or fail
    cuts = [a] + inside + [b]
    gaps = []
    for left, right in zip(cuts, cuts[1:]):
        lo = left if not isinstance(left, RootBox) else left.hi
        hi = right if not isinstance(right, RootBox) else right.lo
        gaps.append((lo, hi, within_caps(c, _gap_points(lo, hi), rcap, thetacap_pi)))
    keep = list(range(len(gaps)))
    if move_b:
        while keep and not gaps[keep[-1]][2]:
            keep.pop()
    if move_a:
        while keep and not gaps[keep[0]][2]:
            keep.pop(0)
    if not (move_a or move_b):
        # untouched, but still report whether the caps hold on it
        return replace(iv, caps_ok=all(g[2] for g in gaps))
    if not keep:
        return None
    new_a = iv.a if not move_a else gaps[keep[0]][0]
    new_b = iv.b if not move_b else gaps[keep[-1]][1]
    ok = all(gaps[i][2] for i in keep)
    return replace(iv, a=new_a, b=new_b,
                   bordered=(move_a and new_a != iv.a, move_b and new_b != iv.b), caps_ok=ok)


def border_margins(p: PlotPlan, c: PolarCurve, rcap=Fraction(50), thetacap_pi=Fraction(40)) -> PlotPlan:
    rcap, thetacap_pi = Fraction(rcap), Fraction(thetacap_pi)
    if rcap <= 0 or thetacap_pi <= 0:
        raise ValueError("caps must be positive")
    crossings = _crossings(c, rcap, thetacap_pi)
    out, warn = [], list(p.warnings)
    for iv in p.intervals:
        nv = border_interval(iv, c, rcap, thetacap_pi, crossings)
        if nv is None:
            msg = f"interval ({float(iv.a):.6g}, {float(iv.b):.6g}) vanished under the caps; dropped"
            warnings.warn(msg)
            warn.append(msg)
            continue
        out.append(nv)
    return replace(p, intervals=out, warnings=warn)
