"""Analysis of a single rational function of t: limits, boundedness,
extrema, zeros/poles and the point at infinity of a curve."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import mpmath
from sympy import Poly

from .exactpoly import (
    S,
    T,
    Interval,
    PolyMisuseError,
    RootBox,
    _frac,
    count_roots,
    eval_interval,
    isolate_real_roots,
    normalize,
    poly,
    resultant,
    sign_at_root,
)
from .parse import PolarCurve, RationalFunction

INF = math.inf
Param = Union[Fraction, RootBox, float]  # float only for +-inf
Value = Union[Fraction, RootBox]


# ---------------------------------------------------------------------------
# exact real values: rationals or algebraic numbers given by a RootBox


def value_float(v: Value) -> float:
    return float(v)


def _eval_poly_frac(f: Poly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in f.rep.to_list():
        acc = acc * x + _frac(c)
    return acc


def compare_values(a: Value, b: Value) -> int:
    """Exact three-way comparison of two real algebraic values."""
    if isinstance(a, RootBox) and a.exact is not None:
        a = a.exact
    if isinstance(b, RootBox) and b.exact is not None:
        b = b.exact
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return (a > b) - (a < b)
    if isinstance(a, Fraction):
        return -compare_values(b, a)
    if isinstance(b, Fraction):
        if a.lo < b < a.hi and _eval_poly_frac(poly(a.polynomial, T), b) == 0:
            return 0
        while a.lo <= b <= a.hi:
            a = a.refine((a.hi - a.lo) / 8)
            if a.exact is not None:
                return compare_values(a.exact, b)
        return 1 if a.lo > b else -1
    pa, pb = normalize(poly(a.polynomial, T)), normalize(poly(b.polynomial, T))
    if pa == pb:
        lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
        if lo < hi and count_roots(pa, T, lo, hi) == 1:
            return 0
    while not (a.hi < b.lo or b.hi < a.lo):
        a = a.refine((a.hi - a.lo) / 8)
        b = b.refine((b.hi - b.lo) / 8)
    return 1 if a.lo > b.hi else -1


def negate_value(v: Value) -> Value:
    if isinstance(v, Fraction):
        return -v
    if v.exact is not None:
        return Fraction(-v.exact)
    q = normalize(poly(v.polynomial.as_expr().subs(T, -T), T))
    return RootBox(q, -v.hi, -v.lo, v.multiplicity, None, T)


def rational_value(v: Value) -> Fraction | None:
    if isinstance(v, Fraction):
        return v
    return v.exact


# ---------------------------------------------------------------------------
# extended values


@dataclass(frozen=True)
class ExtendedValue:
    """A limit value: finite (exact), +inf, -inf or undefined.

    ``undefined`` is only produced at odd-order poles, where ``left`` and
    ``right`` carry the two one-sided infinities.
    """

    tag: str  # "finite" | "+inf" | "-inf" | "undefined"
    value: Value | None = None
    left: "ExtendedValue | None" = None
    right: "ExtendedValue | None" = None

    @property
    def is_finite(self) -> bool:
        return self.tag == "finite"

    @property
    def is_infinite(self) -> bool:
        """Infinite in absolute value (on every side)."""
        return self.tag in ("+inf", "-inf", "undefined")

    @property
    def is_zero(self) -> bool:
        return self.is_finite and rational_value(self.value) == 0

    def __float__(self):
        if self.tag == "finite":
            return float(self.value)
        if self.tag == "+inf":
            return INF
        if self.tag == "-inf":
            return -INF
        return math.nan

    def side(self, s: str) -> "ExtendedValue":
        if self.tag != "undefined":
            return self
        return self.left if s == "-" else self.right


FINITE_ZERO = ExtendedValue("finite", Fraction(0))
PLUS_INF = ExtendedValue("+inf")
MINUS_INF = ExtendedValue("-inf")


def _inf_of_sign(s: int) -> ExtendedValue:
    return PLUS_INF if s > 0 else MINUS_INF


def is_infinite_param(t0) -> bool:
    return isinstance(t0, float) and math.isinf(t0)


def _point_poly(t0) -> Poly:
    """Irreducible QQ[t] polynomial vanishing at a finite parameter value."""
    if isinstance(t0, RootBox):
        if t0.exact is not None:
            t0 = t0.exact
        else:
            return poly(t0.polynomial, T)
    t0 = Fraction(t0)
    return poly(t0.denominator * T - t0.numerator, T)


def _as_box(t0) -> RootBox:
    if isinstance(t0, RootBox):
        return t0
    t0 = Fraction(t0)
    return RootBox(_point_poly(t0), t0 - 1, t0 + 1, 1, t0, T)


def order_at(f: Poly, t0) -> int:
    """Multiplicity of the finite point t0 as a root of f (f nonzero)."""
    q = _point_poly(t0)
    f = poly(f, T)
    m = 0
    while not f.is_zero and f.degree() >= q.degree():
        quo, rem = f.div(q)
        if not rem.is_zero:
            break
        f, m = quo, m + 1
    return m


def _deflate(f: Poly, q: Poly, m: int) -> Poly:
    for _ in range(m):
        f = f.exquo(q)
    return f


def sign_at(f: Poly, t0) -> int:
    """Exact sign of f at a finite parameter (rational or RootBox)."""
    return sign_at_root(poly(f, T), _as_box(t0))


def value_at(f: RationalFunction, t0) -> Value:
    """f(t0) exactly for a finite non-pole t0; algebraic values come back as
    a RootBox of their minimal polynomial."""
    box = _as_box(t0)
    if box.exact is not None:
        return f(box.exact)
    if order_at(f.num, box) > 0:
        return Fraction(0)
    q = poly(box.polynomial, T)
    # value y satisfies y*M(t) - N(t) = 0 at t = t0; y is carried by s
    expr = S * f.den.as_expr() - f.num.as_expr()
    R = resultant(poly(q.as_expr(), T, S), poly(expr, T, S), T)
    R = poly(R.as_expr().subs(S, T), T)
    cands = isolate_real_roots(R, T)
    b = box
    while True:
        iv = b.as_interval()
        den = eval_interval(f.den, {T: iv})
        if den.sign() is not None:
            val = eval_interval(f.num, {T: iv}) / den
            hits = [c for c in cands if not (c.hi < val.lo or c.lo > val.hi)]
            if len(hits) == 1:
                return hits[0]
            cands = [c.refine((c.hi - c.lo) / 4) for c in cands]
        b = b.refine((b.hi - b.lo) / 16)


# ---------------------------------------------------------------------------
# limits


def limit_at(f: RationalFunction, t0: Param, side: str | None = None) -> ExtendedValue:
    """Exact limit of f at t0 (finite or +-inf).

    ``side`` is ``"+"`` or ``"-"`` for a one-sided limit at a finite t0.  A
    two-sided request at an odd-order pole returns ``undefined`` carrying
    both one-sided infinities.
    """
    n, d = f.num, f.den
    if is_infinite_param(t0):
        dn = -1 if n.is_zero else n.degree()
        dd = d.degree()
        if n.is_zero or dn < dd:
            return FINITE_ZERO
        if dn == dd:
            return ExtendedValue("finite", _frac(n.LC()) / _frac(d.LC()))
        s = (1 if n.LC() * d.LC() > 0 else -1)
        if t0 < 0 and (dn - dd) % 2 == 1:
            s = -s
        return _inf_of_sign(s)
    box = _as_box(t0)
    m = order_at(d, box)
    if m == 0:
        return ExtendedValue("finite", value_at(f, box))
    q = _point_poly(box)
    dt = _deflate(d, q, m)
    s_right = sign_at(n, box) * sign_at(dt, box) * sign_at(q.diff(T), box) ** m
    s_left = s_right * (-1) ** m
    right, left = _inf_of_sign(s_right), _inf_of_sign(s_left)
    if side == "+":
        return right
    if side == "-":
        return left
    if right == left:
        return right
    return ExtendedValue("undefined", None, left, right)


def bounded_on_reals(f: RationalFunction) -> bool:
    if not f.num.is_zero and f.num.degree() > f.den.degree():
        return False
    return f.den.degree() == 0 or count_roots(f.den, T) == 0


@dataclass
class Extrema:
    inf: ExtendedValue
    sup: ExtendedValue
    inf_at: list = field(default_factory=list)
    sup_at: list = field(default_factory=list)


def critical_points(f: RationalFunction) -> list[RootBox]:
    n, d = f.num, f.den
    g = n.diff(T) * d - n * d.diff(T)
    if g.is_zero:
        return []
    return isolate_real_roots(poly(g, T), T)


def global_extrema(f: RationalFunction) -> Extrema:
    """Exact supremum/infimum of a bounded f over the reals and where they
    are attained (empty when only approached as t -> +-inf)."""
    if not bounded_on_reals(f):
        raise PolyMisuseError("global_extrema needs a function bounded on the reals")
    at_inf = limit_at(f, INF).value
    sup, inf = at_inf, at_inf
    sup_at, inf_at = [], []
    for c in critical_points(f):
        v = value_at(f, c)
        cs = compare_values(v, sup)
        if cs > 0:
            sup, sup_at = v, [c]
        elif cs == 0:
            sup_at.append(c)
        ci = compare_values(v, inf)
        if ci < 0:
            inf, inf_at = v, [c]
        elif ci == 0:
            inf_at.append(c)
    return Extrema(ExtendedValue("finite", inf), ExtendedValue("finite", sup), inf_at, sup_at)


def zeros_and_poles(f: RationalFunction) -> tuple[list[RootBox], list[RootBox]]:
    zeros = [] if f.num.is_zero else isolate_real_roots(f.num, T)
    return zeros, isolate_real_roots(f.den, T)


# ---------------------------------------------------------------------------
# point at infinity


@dataclass(frozen=True)
class PInfinity:
    exists: bool
    r_inf: Fraction | None = None
    theta_inf: Fraction | None = None
    cartesian: tuple[Interval, Interval] | None = None


def _raw_to_fraction(m) -> Fraction:
    sign, man, exp, _ = m
    x = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -x if sign else x


def _iv_to_interval(v) -> Interval:
    a, b = v._mpi_
    return Interval(_raw_to_fraction(a), _raw_to_fraction(b))


def polar_to_cartesian_enclosure(r: Fraction, theta: Fraction, bits: int = 64) -> tuple[Interval, Interval]:
    """Certified enclosures of (r cos theta, r sin theta) for rational r, theta."""
    if r == 0:
        return Interval.point(0), Interval.point(0)
    iv = mpmath.iv
    saved = iv.prec
    iv.prec = bits + 8
    try:
        th = iv.mpf(theta.numerator) / theta.denominator
        rr = iv.mpf(r.numerator) / r.denominator
        x, y = rr * iv.cos(th), rr * iv.sin(th)
        return _iv_to_interval(x), _iv_to_interval(y)
    finally:
        iv.prec = saved


def point_at_infinity(c: PolarCurve) -> PInfinity:
    lr, lt = limit_at(c.r, INF), limit_at(c.theta, INF)
    if not (lr.is_finite and lt.is_finite):
        return PInfinity(False)
    r_inf, th_inf = rational_value(lr.value), rational_value(lt.value)
    return PInfinity(True, r_inf, th_inf, polar_to_cartesian_enclosure(r_inf, th_inf))
