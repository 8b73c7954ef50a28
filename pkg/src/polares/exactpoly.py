"""Exact arithmetic kernel.

Multivariate polynomials over QQ in the variables ``t, s, k, p`` where ``p``
is an indeterminate standing in for pi.  Polynomials are plain
:class:`sympy.Poly` objects over ``QQ`` whose generators are always kept in
the canonical order ``t > s > k > p``.  All algebra (gcd, resultants,
square-free parts) treats ``p`` symbolically; it is only replaced by a
certified rational enclosure of pi when a sign has to be decided, which is
always possible because a nonzero element of QQ[pi] never vanishes.
"""
from __future__ import annotations

import contextlib
import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
import sympy
from sympy import QQ, Poly

T, S, K, P = sympy.symbols("t s k p")
GENS = (T, S, K, P)

DEFAULT_PI_BITS = 128


class PolyMisuseError(ValueError):
    """Raised when an operation is called outside its precondition."""


class UndefinedGcdError(PolyMisuseError):
    pass


# ---------------------------------------------------------------------------
# construction helpers


def _canonical(gens: Iterable[sympy.Symbol]) -> tuple:
    gs = set(gens)
    return tuple(g for g in GENS if g in gs)


def poly(expr, *gens) -> Poly:
    """Build a polynomial over QQ with generators in canonical order.

    Without explicit ``gens`` the free symbols of ``expr`` are used (falling
    back to ``t`` for constants).
    """
    if isinstance(expr, Poly):
        if not gens:
            gens = expr.gens
        expr = expr.as_expr()
    expr = sympy.sympify(expr)
    if not gens:
        gens = expr.free_symbols or {T}
    unknown = set(gens) - set(GENS)
    if unknown:
        raise PolyMisuseError(f"unsupported variables {sorted(map(str, unknown))}")
    return Poly(expr, *_canonical(gens), domain=QQ)


def unify(*fs: Poly) -> list[Poly]:
    gens = _canonical(g for f in fs for g in f.gens)
    return [Poly(f.as_expr(), *gens, domain=QQ) for f in fs]


def involves(f: Poly, var) -> bool:
    return var in f.gens and f.degree(var) > 0


def depends_on(f: Poly) -> set:
    return {g for g in f.gens if f.degree(g) > 0}


def is_constant(f: Poly) -> bool:
    return not depends_on(f)


def normalize(f: Poly) -> Poly:
    """Primitive integer form with positive leading coefficient (lex t>s>k>p)."""
    if f.is_zero:
        return f
    f = Poly(f.as_expr(), *_canonical(f.gens), domain=QQ)
    _, g = f.clear_denoms(convert=True)
    _, g = g.primitive()
    if g.LC() < 0:
        g = -g
    return Poly(g.as_expr(), *f.gens, domain=QQ)


def same_up_to_unit(f: Poly, g: Poly) -> bool:
    f, g = unify(f, g)
    return normalize(f) == normalize(g)


# ---------------------------------------------------------------------------
# gcd, resultant, square-free part


def gcd_poly(f: Poly, g: Poly, main_var=None) -> Poly:
    """Greatest common divisor, primitive with positive leading coefficient.

    ``main_var`` is accepted for interface symmetry with :func:`resultant`;
    the gcd itself does not depend on it.
    """
    f, g = unify(f, g)
    if f.is_zero and g.is_zero:
        raise UndefinedGcdError("gcd(0, 0) is undefined")
    return normalize(f.gcd(g))


def resultant(f: Poly, g: Poly, var) -> Poly:
    """Res_var(f, g) via subresultant PRS; result lives in the other variables."""
    f, g = unify(f, g)
    if not involves(f, var) or not involves(g, var):
        raise PolyMisuseError(f"resultant needs positive degree in {var} for both inputs")
    rest = tuple(x for x in f.gens if x != var)
    F = Poly(f.as_expr(), var, *rest, domain=QQ)
    G = Poly(g.as_expr(), var, *rest, domain=QQ)
    r = F.resultant(G)
    if isinstance(r, Poly):
        r = r.as_expr()
    return Poly(r, *(rest or (var,)), domain=QQ)


def squarefree_part(f: Poly) -> Poly:
    if f.is_zero:
        raise PolyMisuseError("square-free part of the zero polynomial")
    if is_constant(f):
        return poly(1, *f.gens)
    return normalize(f.sqf_part())


def content_in(f: Poly, keep: Sequence) -> Poly:
    """gcd of the coefficients of ``f`` seen as a polynomial in the variables
    outside ``keep``; the result only involves variables in ``keep``."""
    others = [g for g in f.gens if g not in keep]
    kept = _canonical(g for g in f.gens if g in keep) or (T,)
    if not others:
        return f
    coeffs = Poly(f.as_expr(), *others).coeffs()
    c = Poly(0, *kept, domain=QQ)
    for a in coeffs:
        c = c.gcd(Poly(a, *kept, domain=QQ))
        if c.is_ground:
            break
    return c


def strip_univariate_in(f: Poly, var) -> Poly:
    """Remove every factor of ``f`` that involves no variable other than
    ``var`` and ``p``.

    This deletes the factors that are univariate in ``var`` together with
    the pure QQ[p] content.
    """
    if f.is_zero:
        raise PolyMisuseError("cannot strip the zero polynomial")
    c = content_in(f, (var, P))
    q = f.exquo(Poly(c.as_expr(), *f.gens, domain=QQ))
    if is_constant(q):
        return poly(1, *f.gens)
    return normalize(q)


def diff(f: Poly, var) -> Poly:
    return f.diff(var) if var in f.gens else Poly(0, *f.gens, domain=QQ)


# ---------------------------------------------------------------------------
# exact rational intervals and the pi enclosure


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    @staticmethod
    def point(x) -> "Interval":
        x = Fraction(x)
        return Interval(x, x)

    def __add__(self, o):
        o = _as_interval(o)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, o):
        return self + (-_as_interval(o))

    def __rsub__(self, o):
        return _as_interval(o) - self

    def __mul__(self, o):
        o = _as_interval(o)
        c = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(c), max(c))

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = _as_interval(o)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("interval division by an interval containing 0")
        return self * Interval(1 / o.hi, 1 / o.lo)

    def __pow__(self, n: int):
        if n == 0:
            return Interval.point(1)
        if n % 2 == 1 or self.lo >= 0:
            a, b = self.lo**n, self.hi**n
            return Interval(min(a, b), max(a, b))
        if self.hi <= 0:
            return Interval(self.hi**n, self.lo**n)
        return Interval(Fraction(0), max(self.lo**n, self.hi**n))

    def abs_upper(self) -> Fraction:
        return max(abs(self.lo), abs(self.hi))

    def abs_lower(self) -> Fraction:
        if self.lo > 0:
            return self.lo
        if self.hi < 0:
            return -self.hi
        return Fraction(0)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def sign(self):
        """+1 / -1 when certified, None when the interval straddles 0."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return None

    def __float__(self):
        return float(self.mid)


def _as_interval(x) -> Interval:
    return x if isinstance(x, Interval) else Interval.point(x)


@dataclass(frozen=True)
class PiEnclosure:
    precision: int
    lower: Fraction
    upper: Fraction

    @property
    def interval(self) -> Interval:
        return Interval(self.lower, self.upper)

    def refined(self) -> "PiEnclosure":
        return pi_enclosure(2 * self.precision)


_start_bits = [DEFAULT_PI_BITS]


@contextlib.contextmanager
def working_precision(bits: int):
    """Starting precision of the pi enclosure; decisions refine past it on demand."""
    if bits < 32:
        raise ValueError("precision must be at least 32 bits")
    old = _start_bits[0]
    _start_bits[0] = int(bits)
    try:
        yield
    finally:
        _start_bits[0] = old


def pi_enclosure(bits: int | None = None) -> PiEnclosure:
    """Rational bracket of pi of width at most 2**(1 - bits)."""
    return _pi_enclosure(bits or _start_bits[0])


@functools.lru_cache(maxsize=None)
def _pi_enclosure(bits: int) -> PiEnclosure:
    with mpmath.workprec(bits + 16):
        man, exp = mpmath.mpf(mpmath.pi).man_exp
    approx = Fraction(man) * Fraction(2) ** exp
    eps = Fraction(1, 2**bits)
    return PiEnclosure(bits, approx - eps, approx + eps)


# ---------------------------------------------------------------------------
# evaluation and sign decisions


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    return Fraction(int(c.numerator), int(c.denominator))


def eval_interval(f: Poly, env: dict) -> Interval:
    """Interval value of ``f`` with each generator replaced by ``env[gen]``."""
    boxes = [_as_interval(env[g]) for g in f.gens]
    total = Interval.point(0)
    for monom, c in f.rep.terms():
        term = Interval.point(_frac(c))
        for b, e in zip(boxes, monom):
            if e:
                term = term * b**e
        total = total + term
    return total


def eval_at(f: Poly, env: dict) -> Poly:
    """Exact partial evaluation at rational values; the result keeps the
    remaining generators (or ``t`` if none remain)."""
    f = Poly(f.as_expr().subs({g: sympy.Rational(v.numerator, v.denominator) if isinstance(v, Fraction) else v
                                for g, v in env.items()}),
             *(_canonical(g for g in f.gens if g not in env) or (T,)), domain=QQ)
    return f


class _PPoly:
    """Dense polynomial in p with Fraction coefficients (low degree first)."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.c = c

    def is_zero(self) -> bool:
        return not self.c

    def interval(self, pi: PiEnclosure) -> Interval:
        box = pi.interval
        acc = Interval.point(0)
        for a in reversed(self.c):
            acc = acc * box + a
        return acc


def _ppoly_from_polyelement(e) -> _PPoly:
    d = {}
    for monom, c in e.terms():
        d[monom[0] if monom else 0] = _frac(c)
    n = max(d) + 1 if d else 0
    return _PPoly(d.get(i, Fraction(0)) for i in range(n))


def sign_of_ppoly(a: _PPoly, pi: PiEnclosure | None = None) -> int:
    if a.is_zero():
        return 0
    pi = pi or pi_enclosure()
    while True:
        s = a.interval(pi).sign()
        if s is not None:
            return s
        pi = pi.refined()


def sign_at_pi(f, pi: PiEnclosure | None = None) -> int:
    """Exact sign of an element of QQ[p] (Poly, sympy expr or number) at p = pi."""
    if isinstance(f, (int, Fraction)):
        return (f > 0) - (f < 0)
    f = poly(f, P)
    return sign_of_ppoly(_PPoly(_frac(c) for c in reversed(f.rep.to_list())) if not f.is_zero else _PPoly([]), pi)


def interval_at_pi(f, pi: PiEnclosure | None = None) -> Interval:
    f = poly(f, P)
    return _PPoly(_frac(c) for c in reversed(f.rep.to_list())).interval(pi or pi_enclosure())


# ---------------------------------------------------------------------------
# univariate polynomials in x over QQ[p]


class _XPoly:
    """Univariate polynomial in x whose coefficients live in QQ[p], scaled by
    a known sign: the represented value is ``sign * sum(c_i(p) x^i)``."""

    __slots__ = ("coeffs", "sign")

    def __init__(self, coeffs: list[_PPoly], sign: int = 1):
        self.coeffs = coeffs  # high degree first
        self.sign = sign

    def eval_ppoly(self, x0: Fraction) -> _PPoly:
        acc: list[Fraction] = []
        for c in self.coeffs:
            acc = [a * x0 for a in acc]
            cc = c.c
            if len(acc) < len(cc):
                acc.extend([Fraction(0)] * (len(cc) - len(acc)))
            for i, a in enumerate(cc):
                acc[i] += a
        return _PPoly(acc)

    def sign_at(self, x0: Fraction, pi: PiEnclosure | None = None) -> int:
        return self.sign * sign_of_ppoly(self.eval_ppoly(x0), pi)

    def lead_sign(self, pi=None) -> int:
        return self.sign * sign_of_ppoly(self.coeffs[0], pi)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


def _field_for(f: Poly):
    return QQ.frac_field(P) if P in f.gens and f.degree(P) > 0 else QQ


def _as_xpoly_over(f: Poly, var, dom) -> Poly:
    return Poly(f.as_expr(), var, domain=dom)


def _xpoly_from_field_poly(h: Poly) -> _XPoly:
    """Clear p-denominators of a polynomial over QQ(p), remembering their sign."""
    dom = h.domain
    coeffs = h.rep.to_list()
    if dom == QQ:
        return _XPoly([_PPoly([_frac(c)]) for c in coeffs])
    ring = dom.ring if hasattr(dom, "ring") else dom.field.ring
    denom = ring.one
    for c in coeffs:
        denom = denom.lcm(c.denom)
    out = []
    for c in coeffs:
        num = c.numer * (denom.exquo(c.denom))
        out.append(_ppoly_from_polyelement(num))
    return _XPoly(out, sign_of_ppoly(_ppoly_from_polyelement(denom)))


def _sturm(f: Poly) -> list[_XPoly]:
    if f.domain == QQ:
        seq = [f, f.diff()]
        while not seq[-1].is_zero and seq[-1].degree() > 0:
            r = seq[-2].rem(seq[-1])
            if r.is_zero:
                break
            seq.append(-r)
        return [_xpoly_from_field_poly(h) for h in seq if not h.is_zero]
    return _sturm_over_qp(f)


def _sturm_over_qp(f: Poly) -> list[_XPoly]:
    """Sturm sequence for coefficients in QQ(p) without rational-function
    arithmetic: a primitive pseudo-remainder sequence over QQ[p] where every
    element is rescaled by a factor that is positive at p = pi."""
    var = f.gens[0]
    ring = QQ[P]
    g = Poly(f.as_expr(), var, domain=QQ.frac_field(P))
    _, g = g.clear_denoms()
    g = Poly(g.as_expr(), var, domain=ring)
    seq = [_primitive_at_pi(g), _primitive_at_pi(g.diff())]
    while seq[-1].degree() > 0:
        a, b = seq[-2], seq[-1]
        delta = a.degree() - b.degree()
        r = a.prem(b)
        if r.is_zero:
            break
        # prem multiplies by lc(b)^(delta+1); undo its sign at pi
        if (delta + 1) % 2 == 1 and _ring_sign(b.LC()) < 0:
            r = -r
        seq.append(_primitive_at_pi(-r))
    return [_XPoly([_ppoly_from_polyelement(c) for c in h.rep.to_list()]) for h in seq]


def _ring_sign(c) -> int:
    if hasattr(c, "terms"):
        return sign_of_ppoly(_ppoly_from_polyelement(c))
    return sign_at_pi(c)


def _primitive_at_pi(h: Poly) -> Poly:
    """Divide out the QQ[p] content, keeping the sign at pi."""
    cont, prim = h.primitive()
    if _ring_sign(cont) < 0:
        prim = -prim
    return prim


def _variations(signs: Iterable[int]) -> int:
    last, v = 0, 0
    for s in signs:
        if s == 0:
            continue
        if last and s != last:
            v += 1
        last = s
    return v


def _cauchy_bound(xp: _XPoly, pi=None) -> Fraction:
    pi = pi or pi_enclosure()
    while True:
        lead = xp.coeffs[0].interval(pi)
        if lead.sign() is not None:
            break
        pi = pi.refined()
    low = lead.abs_lower()
    m = max((c.interval(pi).abs_upper() for c in xp.coeffs[1:]), default=Fraction(0))
    b = 1 + m / low
    return Fraction(int(b) + 1)


def root_bound(f: Poly, var, pi: PiEnclosure | None = None) -> Fraction:
    """Rational B with every real root of f (p -> pi) inside (-B, B)."""
    f = poly(f)
    if not involves(f, var):
        return Fraction(1)
    xp = _xpoly_from_field_poly(_as_xpoly_over(f, var, _field_for(f)))
    return _cauchy_bound(xp, pi)


@dataclass(frozen=True, eq=False)
class RootBox:
    """Isolating interval (lo, hi) for a single real root of ``polynomial``.

    ``polynomial`` is square-free in its main variable (irreducible over QQ
    when it does not involve ``p``).  ``exact`` holds the root when it is
    rational.
    """

    polynomial: Poly
    lo: Fraction
    hi: Fraction
    multiplicity: int = 1
    exact: Fraction | None = None
    var: sympy.Symbol = T
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def interval(self) -> tuple[Fraction, Fraction]:
        return (self.lo, self.hi)

    @property
    def is_rational(self) -> bool:
        return self.exact is not None

    @property
    def has_pi(self) -> bool:
        return P in self.polynomial.gens and self.polynomial.degree(P) > 0

    def _xp(self) -> _XPoly:
        if "xp" not in self._cache:
            self._cache["xp"] = _xpoly_from_field_poly(
                _as_xpoly_over(self.polynomial, self.var, _field_for(self.polynomial)))
        return self._cache["xp"]

    def sign_at(self, x0: Fraction, pi=None) -> int:
        return self._xp().sign_at(Fraction(x0), pi)

    def refine(self, width=Fraction(1, 2**40), pi=None) -> "RootBox":
        if self.exact is not None:
            return RootBox(self.polynomial, self.exact - width / 4, self.exact + width / 4,
                           self.multiplicity, self.exact, self.var)
        lo, hi = self.lo, self.hi
        slo = self.sign_at(lo, pi)
        while hi - lo > width:
            m = (lo + hi) / 2
            sm = self.sign_at(m, pi)
            if sm == 0:
                # rational root of a square-free factor: pin it exactly
                return RootBox(self.polynomial, m - width / 4, m + width / 4,
                               self.multiplicity, m, self.var)
            if sm == slo:
                lo = m
            else:
                hi = m
        return RootBox(self.polynomial, lo, hi, self.multiplicity, None, self.var)

    def as_interval(self) -> Interval:
        if self.exact is not None:
            return Interval.point(self.exact)
        return Interval(self.lo, self.hi)

    def __float__(self):
        if self.exact is not None:
            return float(self.exact)
        return float(self.refine(Fraction(1, 2**60)).as_interval().mid)

    def approx(self, digits: int = 30) -> mpmath.mpf:
        if self.exact is not None:
            return mpmath.mpf(self.exact.numerator) / self.exact.denominator
        bits = int(digits * 3.33) + 8
        m = self.refine(Fraction(1, 2**bits)).as_interval().mid
        return mpmath.mpf(m.numerator) / m.denominator

    def __repr__(self):
        if self.exact is not None:
            return f"RootBox({self.exact}, mult={self.multiplicity})"
        return f"RootBox({self.polynomial.as_expr()}, ~{float(self):.12g}, mult={self.multiplicity})"


def count_roots(f: Poly, var, lo: Fraction | None = None, hi: Fraction | None = None, pi=None) -> int:
    """Number of distinct real roots of f (p -> pi) in (lo, hi]; None means infinite."""
    f = poly(f)
    if f.is_zero:
        raise PolyMisuseError("counting roots of the zero polynomial")
    if not involves(f, var):
        return 0
    g = Poly(f.as_expr(), var, domain=_field_for(f))
    seq = _sturm(g)
    return _count(seq, lo, hi, pi)


def _signs_at(seq: list[_XPoly], x0, pi) -> list[int]:
    if x0 is None or x0 in (float("inf"), float("-inf")):
        raise AssertionError
    return [h.sign_at(x0, pi) for h in seq]


def _signs_at_inf(seq: list[_XPoly], positive: bool, pi) -> list[int]:
    out = []
    for h in seq:
        s = h.lead_sign(pi)
        if not positive and h.degree % 2 == 1:
            s = -s
        out.append(s)
    return out


def _count(seq, lo, hi, pi) -> int:
    va = _variations(_signs_at_inf(seq, False, pi) if lo is None else _signs_at(seq, lo, pi))
    vb = _variations(_signs_at_inf(seq, True, pi) if hi is None else _signs_at(seq, hi, pi))
    return va - vb


def _isolate_squarefree(g: Poly, var, pi) -> list[tuple[Fraction, Fraction, Fraction | None]]:
    dom = _field_for(g)
    G = Poly(g.as_expr(), var, domain=dom)
    if G.degree() == 1 and dom == QQ:
        a, b = (_frac(c) for c in G.rep.to_list())
        r = -b / a
        return [(r - 1, r + 1, r)]
    seq = _sturm(G)
    xp = seq[0]
    bound = _cauchy_bound(xp, pi)
    out = []

    def rec(lo, hi, n):
        if n == 0:
            return
        if n == 1:
            out.append((lo, hi, None))
            return
        m = (lo + hi) / 2
        # keep split points off the roots
        step = (hi - lo) / 7
        while xp.sign_at(m, pi) == 0:
            m += step
            step /= 3
        left = _count(seq, lo, m, pi)
        rec(lo, m, left)
        rec(m, hi, n - left)

    total = _count(seq, -bound, bound, pi)
    rec(-bound, bound, total)
    return out


def isolate_real_roots(f: Poly, var=None, pi: PiEnclosure | None = None) -> list[RootBox]:
    """Isolating intervals for every real root of ``f`` with p evaluated at pi.

    ``f`` is univariate in ``var`` with coefficients in QQ[p].  Roots come
    back sorted, with multiplicities; rational roots of p-free inputs are
    reported exactly.
    """
    f = poly(f)
    if var is None:
        vs = depends_on(f) - {P}
        if len(vs) > 1:
            raise PolyMisuseError("isolate_real_roots needs a univariate input")
        var = vs.pop() if vs else T
    if f.is_zero:
        raise PolyMisuseError("cannot isolate the roots of the zero polynomial")
    if depends_on(f) - {P, var}:
        raise PolyMisuseError("isolate_real_roots needs a univariate input")
    if not involves(f, var):
        return []
    pi = pi or pi_enclosure()
    gens = _canonical((var, P)) if involves(f, P) else (var,)
    f = Poly(f.as_expr(), *gens, domain=QQ)
    boxes: list[RootBox] = []
    if P in gens:
        _, factors = f.sqf_list()
    else:
        _, factors = f.factor_list()
    for g, mult in factors:
        if not involves(g, var):
            continue
        g = normalize(g)
        for lo, hi, ex in _isolate_squarefree(g, var, pi):
            boxes.append(RootBox(g, lo, hi, mult, ex, var))
    return _sort_boxes(boxes, pi)


def _sort_boxes(boxes: list[RootBox], pi) -> list[RootBox]:
    # boxes from different factors may overlap; refine until disjoint
    changed = True
    while changed:
        changed = False
        boxes.sort(key=lambda b: (b.lo, b.hi))
        for i in range(len(boxes) - 1):
            a, b = boxes[i], boxes[i + 1]
            if a.hi > b.lo and not (a.exact is not None and b.exact is not None):
                wa, wb = a.hi - a.lo, b.hi - b.lo
                if wa >= wb:
                    boxes[i] = a.refine(wa / 4, pi)
                else:
                    boxes[i + 1] = b.refine(wb / 4, pi)
                changed = True
                break
            if a.hi > b.lo:
                boxes[i] = a.refine(min(a.hi - a.lo, b.exact - a.exact) / 2, pi)
                boxes[i + 1] = b.refine(min(b.hi - b.lo, b.exact - a.exact) / 2, pi)
                changed = True
                break
    return boxes


def sign_at_root(f: Poly, box: RootBox, pi: PiEnclosure | None = None) -> int:
    """Exact sign of f(x0) where x0 is the root isolated by ``box``.

    ``f`` may involve ``box.var`` and ``p``.
    """
    pi = pi or pi_enclosure()
    var = box.var
    f = poly(f)
    if f.is_zero:
        return 0
    if not involves(f, var):
        return sign_at_pi(f, pi) if involves(f, P) else int(sympy.sign(f.as_expr()))
    if box.exact is not None:
        v = eval_at(f, {var: box.exact})
        return sign_at_pi(v, pi) if involves(v, P) else int(sympy.sign(v.as_expr()))
    if is_zero_at_root(f, box, pi):
        return 0
    extra = depends_on(f) - {var, P}
    if extra:
        raise PolyMisuseError(f"unexpected variables {sorted(map(str, extra))}")
    b = box
    while True:
        val = eval_interval(f, {var: b.as_interval(), P: pi.interval})
        s = val.sign()
        if s is not None:
            return s
        b = b.refine((b.hi - b.lo) / 16, pi)
        if pi.precision < _bits(b.hi - b.lo) + 64:
            pi = pi.refined()


def _bits(width: Fraction) -> int:
    """Approximate -log2(width) for a positive rational width."""
    return max(0, width.denominator.bit_length() - width.numerator.bit_length())


def is_zero_at_root(f: Poly, box: RootBox, pi=None) -> bool:
    var = box.var
    f = poly(f)
    if f.is_zero:
        return True
    if not involves(f, var):
        return sign_at_pi(f, pi) == 0 if involves(f, P) else f.as_expr() == 0
    if box.exact is not None:
        v = eval_at(f, {var: box.exact})
        return v.is_zero
    g, ff = unify(box.polynomial, f)
    dom = QQ.frac_field(P) if (involves(g, P) or involves(ff, P)) else QQ
    h = Poly(g.as_expr(), var, domain=dom).gcd(Poly(ff.as_expr(), var, domain=dom))
    if h.degree() <= 0:
        return False
    seq = _sturm(h)
    return _count(seq, box.lo, box.hi, pi) > 0
