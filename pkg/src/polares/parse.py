"""Rational-function parsing and curve validation."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import sympy
from sympy import QQ, Poly

import numpy as np

from .exactpoly import S, T, _frac, gcd_poly, poly


class ParseError(ValueError):
    """Syntax error; ``position`` is a 1-based character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class CurveValidationError(ValueError):
    pass


@dataclass(frozen=True)
class RationalFunction:
    """Coprime numerator/denominator over QQ[t].

    Canonical form: integer coefficients with no common content and a
    denominator with positive leading coefficient.
    """

    num: Poly
    den: Poly

    @classmethod
    def make(cls, num, den=1) -> "RationalFunction":
        n, d = poly(num, T), poly(den, T)
        if d.is_zero:
            raise CurveValidationError("zero denominator")
        g = n.gcd(d)
        n, d = n.exquo(g), d.exquo(g)
        cs = n.coeffs() + d.coeffs()
        scale = sympy.ilcm(*(sympy.Rational(c).q for c in cs), 1)
        n, d = n.mul_ground(scale), d.mul_ground(scale)
        content = sympy.igcd(*(int(c) for c in n.coeffs() + d.coeffs()))
        n, d = n.quo_ground(content), d.quo_ground(content)
        if d.LC() < 0:
            n, d = -n, -d
        return cls(n, d)

    @property
    def is_constant(self) -> bool:
        return self.num.degree() <= 0 and self.den.degree() <= 0

    def coeffs(self) -> tuple[list[Fraction], list[Fraction]]:
        """Numerator and denominator coefficients as Fractions, highest first."""
        return ([_frac(c) for c in self.num.rep.to_list()] or [Fraction(0)],
                [_frac(c) for c in self.den.rep.to_list()])

    def __call__(self, x: Fraction) -> Fraction:
        n, d = self.coeffs()
        x = Fraction(x)
        dv = _horner(d, x)
        if dv == 0:
            raise ZeroDivisionError(f"pole at t={x}")
        return _horner(n, x) / dv

    def numeric(self):
        """Vectorized float evaluation (numpy)."""
        n, d = self.coeffs()
        nf = np.array([float(c) for c in n])
        df = np.array([float(c) for c in d])
        return lambda t: np.polyval(nf, t) / np.polyval(df, t)

    def as_expr(self):
        return self.num.as_expr() / self.den.as_expr()

    def deriv(self) -> "RationalFunction":
        n, d = self.num, self.den
        return RationalFunction.make(n.diff(T) * d - n * d.diff(T), d * d)

    def __str__(self):
        return format_rational_function(self)


def _horner(coeffs, x):
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * x + c
    return acc


def _fmt_poly(f: Poly) -> str:
    s = str(f.as_expr()).replace("**", "^")
    return s


def format_rational_function(f: RationalFunction) -> str:
    num = _fmt_poly(f.num)
    if f.den.degree() == 0 and f.den.LC() == 1:
        return num
    return f"({num})/({_fmt_poly(f.den)})"


@dataclass(frozen=True)
class PolarCurve:
    r: RationalFunction
    theta: RationalFunction

    @property
    def A(self) -> Poly:
        return self.r.num

    @property
    def B(self) -> Poly:
        return self.r.den

    @property
    def C(self) -> Poly:
        return self.theta.num

    @property
    def D(self) -> Poly:
        return self.theta.den

    def __str__(self):
        return f"({self.r}, {self.theta})"


# ---------------------------------------------------------------------------
# expression grammar
#   expr   := term (('+'|'-') term)*
#   term   := unary (('*'|'/') unary)*
#   unary  := ('+'|'-') unary | power
#   power  := atom ('^' signed_int)?
#   atom   := INT | 't' | '(' expr ')'

_TOKEN = re.compile(r"\s*(?:(\d+)|(t)|(\*\*|[-+*/^()])|(\S))")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace remains
            break
        start = m.start(m.lastindex) + 1
        if m.group(4) is not None:
            raise ParseError(f"unexpected character {m.group(4)!r}", start)
        if m.group(1) is not None:
            out.append(("int", int(m.group(1)), start))
        elif m.group(2) is not None:
            out.append(("var", "t", start))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            out.append(("op", op, start))
        pos = m.end()
    out.append(("end", None, len(text) + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, op):
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            raise ParseError(f"expected {op!r}", tok[2])

    def parse(self):
        val = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError("unexpected token", tok[2])
        return val

    def expr(self):
        n, d = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            n2, d2 = self.term()
            n = n * d2 + n2 * d if op == "+" else n * d2 - n2 * d
            d = d * d2
        return n, d

    def term(self):
        n, d = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            _, op, pos = self.take()
            n2, d2 = self.unary()
            if op == "*":
                n, d = n * n2, d * d2
            else:
                if n2.is_zero:
                    raise ParseError("division by zero", pos)
                n, d = n * d2, d * n2
        return n, d

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            n, d = self.unary()
            return (-n if tok[1] == "-" else n), d
        return self.power()

    def power(self):
        n, d = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            sign = 1
            t2 = self.peek()
            if t2[0] == "op" and t2[1] in "+-":
                self.take()
                sign = -1 if t2[1] == "-" else 1
            e = self.take()
            if e[0] != "int":
                raise ParseError("exponent must be an integer", e[2])
            k = sign * e[1]
            if k < 0:
                if n.is_zero:
                    raise ParseError("zero raised to a negative power", e[2])
                n, d, k = d, n, -k
            n, d = n**k, d**k
        return n, d

    def atom(self):
        tok = self.take()
        one = Poly(1, T, domain=QQ)
        if tok[0] == "int":
            return Poly(tok[1], T, domain=QQ), one
        if tok[0] == "var":
            return Poly(T, T, domain=QQ), one
        if tok[0] == "op" and tok[1] == "(":
            val = self.expr()
            self.expect(")")
            return val
        if tok[0] == "end":
            raise ParseError("unexpected end of input", tok[2])
        raise ParseError(f"unexpected token {tok[1]!r}", tok[2])


def parse_rational_function(text: str) -> RationalFunction:
    n, d = _Parser(text).parse()
    if d.is_zero:
        raise CurveValidationError("zero denominator after simplification")
    return RationalFunction.make(n, d)


def swap_ts(f: Poly) -> Poly:
    return poly(f.as_expr().xreplace({T: S, S: T}), T, S)


def _at_s(f: Poly) -> Poly:
    return poly(f.as_expr().subs(T, S), T, S)


def check_proper(c: PolarCurve) -> bool:
    """True iff gcd(num(r(t)-r(s)), num(theta(t)-theta(s))) is c*(t - s)."""
    A, B, C, D = (poly(x, T, S) for x in (c.A, c.B, c.C, c.D))
    As, Bs, Cs, Ds = (_at_s(x) for x in (c.A, c.B, c.C, c.D))
    g = gcd_poly(A * Bs - As * B, C * Ds - Cs * D)
    return g == poly(T - S, T, S)


def make_curve(r: RationalFunction, theta: RationalFunction) -> PolarCurve:
    if r.is_constant:
        raise CurveValidationError(
            "r(t) is constant: the curve is a circle centered at the origin, which is excluded")
    if theta.is_constant:
        raise CurveValidationError(
            "theta(t) is constant: the curve is a line through the origin, which is excluded")
    c = PolarCurve(r, theta)
    if not check_proper(c):
        raise CurveValidationError(
            "the parametrization is not proper (not injective for almost all t); "
            "reparametrize it before analysis")
    return c


def parse_curve(r_text: str, theta_text: str) -> PolarCurve:
    return make_curve(parse_rational_function(r_text), parse_rational_function(theta_text))
