"""Self-intersections of a rational polar curve.

A point of the curve is a self-intersection when two parameters t != s
reach it.  In polar form this is one of

    r(t) =  r(s),  theta(t) - theta(s) = 2 k pi        (system 1, k != 0)
    r(t) = -r(s),  theta(t) - theta(s) = (2k + 1) pi   (system 2)

plus the origin (r = 0 for several parameters) and the point at infinity.
Everything runs with the symbol p standing for pi; signs are decided at pi
through :class:`PiEnclosure`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import QQ, Poly

from .exactpoly import (
    K,
    P,
    S,
    T,
    Interval,
    PolyMisuseError,
    RootBox,
    count_roots,
    eval_interval,
    gcd_poly,
    involves,
    is_constant,
    is_zero_at_root,
    isolate_real_roots,
    pi_enclosure,
    poly,
    resultant,
    root_bound,
    squarefree_part,
    strip_univariate_in,
)
from .parse import PolarCurve, _at_s
from .ratan import (
    INF,
    compare_values,
    global_extrema,
    bounded_on_reals,
    is_infinite_param,
    point_at_infinity,
    rational_value,
)


class InternalContradiction(RuntimeError):
    """A guard backed by a theorem failed; the input or the kernel is broken."""


# ---------------------------------------------------------------------------
# system polynomials and xi curves


@dataclass(frozen=True)
class SystemPolys:
    alpha: Poly
    beta: Poly
    mu: Poly
    nu: Poly


def build_system_polys(c: PolarCurve) -> SystemPolys:
    A, B, C, D = (poly(x, T, S, K, P) for x in (c.A, c.B, c.C, c.D))
    As, Bs, Cs, Ds = (poly(_at_s(x), T, S, K, P) for x in (c.A, c.B, c.C, c.D))
    k, p = poly(K, T, S, K, P), poly(P, T, S, K, P)
    alpha = A * Bs - As * B
    beta = C * Ds - Cs * D - 2 * k * p * D * Ds
    mu = A * Bs + As * B
    nu = C * Ds - Cs * D - (2 * k + 1) * p * D * Ds
    return SystemPolys(_trim(alpha), _trim(beta), _trim(mu), _trim(nu))


def _trim(f: Poly) -> Poly:
    """Drop generators the polynomial does not use."""
    return poly(f.as_expr(), *[g for g in f.gens if f.degree(g) > 0] or [T])


@dataclass(frozen=True)
class XiCurve:
    xi1: Poly
    xi2: Poly
    res1: Poly
    res2: Poly


def _xi_from(res: Poly) -> Poly:
    if res.is_zero:
        raise InternalContradiction("resultant vanished identically")
    res = poly(res.as_expr(), T, K, P)
    return strip_univariate_in(squarefree_part(res), T) if not is_constant(res) else res


def xi_curves(sys: SystemPolys) -> XiCurve:
    r1 = resultant(sys.alpha, sys.beta, S)
    r2 = resultant(sys.mu, sys.nu, S)
    return XiCurve(_xi_from(r1), _xi_from(r2), r1, r2)


# ---------------------------------------------------------------------------
# boundedness in k of the real zero set of xi(t, k)


@dataclass
class KBoundednessVerdict:
    """Real behaviour of {xi(t, k) = 0} as |k| grows.

    ``k_bound`` is a rational beyond which the number of real t-roots of
    xi(., k) no longer changes, so a bounded curve lives in |k| < k_bound.
    ``vertical_asymptotes`` holds (t0 box, k-directions) for branches with
    t -> t0 and ``infinity_branches`` the signs of t for branches with
    t -> +-inf, both while |k| -> inf.
    """

    xi: Poly
    k_bound: Fraction
    vertical_asymptotes: list = field(default_factory=list)
    infinity_branches: set = field(default_factory=set)

    @property
    def bounded(self) -> bool:
        return not self.vertical_asymptotes and not self.infinity_branches

    @property
    def tag(self) -> str:
        if self.bounded:
            return "bounded"
        if self.vertical_asymptotes:
            return "vertical_asymptotes"
        return "branch_at_t_infinity"


def _as_tkp(f) -> Poly:
    return poly(f.as_expr() if isinstance(f, Poly) else f, T, K, P)


def _at_k(xi: Poly, k0) -> Poly:
    """xi(t, k0) as a polynomial in t and p."""
    return poly(_as_tkp(xi).as_expr().subs(K, k0), T, P)


def _at_t(xi: Poly, t0: Fraction) -> Poly:
    from sympy import Rational
    return poly(_as_tkp(xi).as_expr().subs(T, Rational(t0.numerator, t0.denominator)), K, P)


def _k_root_bound(f: Poly) -> Fraction:
    f = poly(f.as_expr(), K, P)
    if f.is_zero:
        raise InternalContradiction("xi vanishes on a whole vertical line")
    if not involves(f, K):
        return Fraction(0)
    return root_bound(f, K)


def _leading_coeff(f: Poly, var, rest) -> Poly:
    """Coefficient of the top power of ``var``, as a polynomial in ``rest``."""
    f = poly(f.as_expr(), var, *rest)
    d = f.degree(var)
    i = f.gens.index(var)
    terms = {m[:i] + m[i + 1:]: c for m, c in f.terms() if m[i] == d}
    others = tuple(g for g in f.gens if g != var)
    return Poly.from_dict(terms, *others, domain=QQ)


def _critical_k_poly(xi: Poly) -> Poly:
    """lc_t(xi) * disc_t(xi) in k and p (xi itself when it has no t)."""
    f = _as_tkp(xi)
    if not involves(f, T):
        return poly(f.as_expr(), K, P)
    w = _leading_coeff(f, T, (K, P))
    if f.degree(T) > 1:
        disc = f.discriminant()
        w = w * poly(disc.as_expr() if isinstance(disc, Poly) else disc, K, P)
    return poly(w.as_expr(), K, P)


def k_projection_range(xi: Poly) -> tuple[int, int] | None:
    """Integer hull of the k-values reached by a k-bounded real zero set
    {xi = 0}; None when no real point exists."""
    w = _critical_k_poly(xi)
    roots = isolate_real_roots(w, K) if involves(w, K) else []
    if not roots:
        return None
    return math.floor(roots[0].lo), math.ceil(roots[-1].hi)


def critical_k_bound(xi: Poly) -> Fraction:
    """Rational bound past every k where a real t-root of xi(., k) can be
    born, die, or escape to t = inf (roots of lc_t * disc_t)."""
    f = _as_tkp(xi)
    b = _k_root_bound(_leading_coeff(f, T, (K, P)))
    if f.degree(T) > 1:
        disc = f.discriminant()
        b = max(b, _k_root_bound(poly(disc.as_expr() if isinstance(disc, Poly) else disc, K, P)))
    return b + 1


def _lead_in_k(xi: Poly) -> Poly:
    return poly(_leading_coeff(xi, K, (T, P)).as_expr(), T, P)


def k_boundedness(xi: Poly) -> KBoundednessVerdict:
    xi = _as_tkp(xi)
    if not involves(xi, K) or not involves(xi, T):
        # finitely many k (or none): bounded
        return KBoundednessVerdict(xi, _k_root_bound(poly(xi.as_expr(), K, P)) + 1)
    kb = critical_k_bound(xi)
    verdict = KBoundednessVerdict(xi, kb)
    a_d = _lead_in_k(xi)
    poles = isolate_real_roots(a_d, T) if involves(a_d, T) else []
    for box in poles:
        lo, hi = box.lo, box.hi
        kk = max(kb, _k_root_bound(_at_t(xi, lo)) + 1, _k_root_bound(_at_t(xi, hi)) + 1)
        dirs = {sgn for sgn in (1, -1) if count_roots(_at_k(xi, sgn * kk), T, lo, hi)}
        if dirs:
            verdict.vertical_asymptotes.append((box, dirs))
    # t -> +-inf: beyond every root of a_d no branch can converge to a finite t
    tb = max([abs(b.lo) for b in poles] + [abs(b.hi) for b in poles] + [Fraction(1)]) + 1
    kk = max(kb, _k_root_bound(_at_t(xi, tb)) + 1, _k_root_bound(_at_t(xi, -tb)) + 1)
    for sgn in (1, -1):
        f = _at_k(xi, sgn * kk)
        if count_roots(f, T, tb, None):
            verdict.infinity_branches.add(1)
        if count_roots(f, T, None, -tb):
            verdict.infinity_branches.add(-1)
    return verdict


# ---------------------------------------------------------------------------
# exact helpers on theta's range


def _floor_certified(make_interval) -> int:
    """floor of a real number known never to be an integer, from a family of
    shrinking enclosures ``make_interval(level)``."""
    level = 0
    while True:
        iv = make_interval(level)
        lo, hi = math.floor(iv.lo), math.floor(iv.hi)
        if lo == hi and iv.hi != hi:
            return lo
        level += 1
        if level > 40:
            raise InternalContradiction("floor could not be certified")


def _value_interval(v, level: int) -> Interval:
    if isinstance(v, Fraction):
        return Interval.point(v)
    if v.exact is not None:
        return Interval.point(v.exact)
    return v.refine(Fraction(1, 2 ** (16 + 8 * level))).as_interval()


def theta_width(c: PolarCurve):
    """(inf, sup) of a bounded theta as exact values."""
    e = global_extrema(c.theta)
    return e.inf.value, e.sup.value


# ---------------------------------------------------------------------------
# candidate k values


@dataclass(frozen=True)
class CandidateRange:
    lo: int
    hi: int
    values: tuple[int, ...]
    source: str  # "theta_range" or "xi_projection"


def _has_real_point(xi: Poly, k0: int) -> bool:
    f = _at_k(xi, k0)
    if f.is_zero:
        return True
    return involves(f, T) and count_roots(f, T) > 0


def integer_k_candidates(c: PolarCurve, system: int, xi: XiCurve | None = None,
                         verdict: KBoundednessVerdict | None = None) -> CandidateRange:
    """Integers k for which system 1 or 2 may have real solutions."""
    if system not in (1, 2):
        raise PolyMisuseError("system must be 1 or 2")
    xi = xi or xi_curves(build_system_polys(c))
    curve = xi.xi1 if system == 1 else xi.xi2
    if bounded_on_reals(c.theta):
        lo_v, hi_v = theta_width(c)

        def w_over_2pi(shift, sign):
            # (sign * W + shift * pi) / (2 pi) enclosures
            def mk(level):
                pi = pi_enclosure(128 + 32 * level).interval
                w = _value_interval(hi_v, level) - _value_interval(lo_v, level)
                num = w * Interval.point(sign) + pi * Interval.point(shift)
                return num / (pi * Interval.point(2))
            return mk

        w_zero = compare_values(hi_v, lo_v) == 0
        if system == 1:
            kmax = 0 if w_zero else _floor_certified(w_over_2pi(0, 1))
            lo, hi = -kmax, kmax
        else:
            # k in [(-W - pi) / 2pi, (W - pi) / 2pi]
            hi = _floor_certified(w_over_2pi(-1, 1))
            lo = -_floor_certified(w_over_2pi(1, 1))  # ceil(-x) = -floor(x)
        source = "theta_range"
    else:
        verdict = verdict or k_boundedness(curve)
        if not verdict.bounded:
            raise PolyMisuseError(f"xi{system} is unbounded in k: infinitely many candidates")
        # bounded: between consecutive critical k the real root count is
        # constant, and it vanishes beyond the extreme critical values
        rng = k_projection_range(curve)
        lo, hi = rng if rng is not None else (0, -1)
        source = "xi_projection"
    vals = tuple(k for k in range(lo, hi + 1)
                 if not (system == 1 and k == 0) and _has_real_point(curve, k))
    return CandidateRange(lo, hi, vals, source)


# ---------------------------------------------------------------------------
# solving one system for one integer k


@dataclass(frozen=True)
class Solution:
    system: int
    k: int
    t: Interval
    s: Interval
    certified: bool

    @property
    def t_mid(self) -> float:
        return float(self.t.mid)

    @property
    def s_mid(self) -> float:
        return float(self.s.mid)


def _system_pair(sys: SystemPolys, k0: int, system: int) -> tuple[Poly, Poly]:
    if system == 1:
        f, g = sys.alpha, sys.beta
    else:
        f, g = sys.mu, sys.nu
    g = poly(g.as_expr().subs(K, k0), T, S, P)
    return poly(f.as_expr(), T, S, P), g


def _grad(f: Poly):
    return f.diff(T), f.diff(S)


def _krawczyk(F, J, tI: Interval, sI: Interval, pi) -> tuple[Interval, Interval] | None:
    """Krawczyk operator on tI x sI.  A result strictly inside the box proves
    a unique zero of F there; None means the test failed."""
    env_box = {T: tI, S: sI, P: pi.interval}
    tm, sm = tI.mid, sI.mid
    env_mid = {T: Interval.point(tm), S: Interval.point(sm), P: pi.interval}
    Jm = [[eval_interval(J[i][j], env_mid).mid for j in range(2)] for i in range(2)]
    det = Jm[0][0] * Jm[1][1] - Jm[0][1] * Jm[1][0]
    if det == 0:
        return None
    Y = [[Jm[1][1] / det, -Jm[0][1] / det], [-Jm[1][0] / det, Jm[0][0] / det]]
    Fm = [eval_interval(F[i], env_mid) for i in range(2)]
    JX = [[eval_interval(J[i][j], env_box) for j in range(2)] for i in range(2)]
    dx = [tI - Interval.point(tm), sI - Interval.point(sm)]
    out = []
    for i in range(2):
        acc = Interval.point((tm, sm)[i])
        for j in range(2):
            acc = acc - Fm[j] * Interval.point(Y[i][j])
        for j in range(2):
            mij = Interval.point(1 if i == j else 0)
            for l in range(2):
                mij = mij - JX[l][j] * Interval.point(Y[i][l])
            acc = acc + mij * dx[j]
        out.append(acc)
    if tI.lo < out[0].lo and out[0].hi < tI.hi and sI.lo < out[1].lo and out[1].hi < sI.hi:
        return out[0], out[1]
    return None


def _contract(F, J, tI, sI, pi, width):
    """Iterate the Krawczyk operator on a certified box down to ``width``."""
    while max(tI.width, sI.width) > width:
        nxt = _krawczyk(F, J, tI, sI, pi)
        if nxt is None:
            if pi.precision >= 1024:
                break
            pi = pi.refined()
            continue
        tI, sI = nxt
        tI, sI = _round_out(tI), _round_out(sI)
    return tI, sI


def _round_out(iv: Interval, bits: int = 256) -> Interval:
    """Outward dyadic rounding keeps the Fractions small."""
    scale = 2**bits
    lo = Fraction(math.floor(iv.lo * scale), scale)
    hi = Fraction(math.ceil(iv.hi * scale), scale)
    return Interval(lo, hi)


def _feasible_roots(res: Poly, var, bd: Poly) -> list[RootBox]:
    res = poly(res.as_expr(), var, P) if involves(res, P) else poly(res.as_expr(), var)
    if not involves(res, var):
        return []
    boxes = isolate_real_roots(res, var)
    bdv = poly(bd.as_expr().subs(T, var), var)
    return [b for b in boxes if not is_zero_at_root(bdv, b)]


def solve_system(c: PolarCurve, k0: int, system: int, sys: SystemPolys | None = None,
                 width: Fraction = Fraction(1, 2**40), max_rounds: int = 60) -> list[Solution]:
    """All real (t, s), t != s, with B D != 0 at both, solving the system.

    Both orders of a pair are returned: (t, s) solves system 1 at k exactly
    when (s, t) solves it at -k.
    """
    if system == 1 and k0 == 0:
        raise PolyMisuseError("system 1 with k = 0 only has the trivial solutions t = s")
    sys = sys or build_system_polys(c)
    f, g = _system_pair(sys, k0, system)
    if not is_constant(gcd_poly(f, g)):
        raise InternalContradiction(f"non-trivial gcd for system {system}, k={k0}")
    bd = poly(c.B * c.D, T)
    t_boxes = _feasible_roots(resultant(f, g, S), T, bd)
    s_boxes = _feasible_roots(resultant(f, g, T), S, bd)
    if not t_boxes or not s_boxes:
        return []
    F = (f, g)
    J = (_grad(f), _grad(g))
    pi = pi_enclosure()
    pending = [(i, j) for i in range(len(t_boxes)) for j in range(len(s_boxes))]
    out = []
    box_width = Fraction(1, 2**10)
    for _ in range(max_rounds):
        t_boxes = [b.refine(box_width, pi) for b in t_boxes]
        s_boxes = [b.refine(box_width, pi) for b in s_boxes]
        still = []
        for i, j in pending:
            tI, sI = _box_interval(t_boxes[i]), _box_interval(s_boxes[j])
            env = {T: tI, S: sI, P: pi.interval}
            if any(eval_interval(h, env).sign() not in (None, 0) for h in F):
                continue
            if _krawczyk(F, J, tI, sI, pi) is not None:
                out.append((i, j, *_contract(F, J, tI, sI, pi, width)))
            else:
                still.append((i, j))
        pending = still
        if not pending:
            break
        box_width /= 2**6
        if box_width < Fraction(1, 2**100) and pi.precision < 512:
            pi = pi.refined()
    if pending:
        raise InternalContradiction(f"could not certify solutions of system {system}, k={k0}")
    sols = []
    for i, j, tI, sI in out:
        if not (tI.hi < sI.lo or sI.hi < tI.lo):
            raise InternalContradiction("solution with t = s")
        sols.append(Solution(system, k0, tI, sI, True))
    sols.sort(key=lambda x: (x.t.lo, x.s.lo))
    return sols


def _box_interval(b: RootBox) -> Interval:
    # exact rational roots keep a genuine box around them for Krawczyk
    return Interval(b.lo, b.hi)


# ---------------------------------------------------------------------------
# origin and point at infinity


@dataclass(frozen=True)
class OriginReport:
    parameters: tuple  # real roots of A
    p_infinity_contributes: bool

    @property
    def times_reached(self) -> int:
        return len(self.parameters)

    @property
    def is_self_intersection(self) -> bool:
        return self.times_reached + int(self.p_infinity_contributes) >= 2


def origin_status(c: PolarCurve) -> OriginReport:
    params = tuple(isolate_real_roots(c.A, T)) if not is_constant(c.A) else ()
    pinf = point_at_infinity(c)
    return OriginReport(params, pinf.exists and pinf.r_inf == 0)


@dataclass(frozen=True)
class PInfinityReached:
    origin_case: bool
    k0_count: int
    k_nonzero_possible: bool = False


def p_infinity_reached(c: PolarCurve) -> PInfinityReached:
    pinf = point_at_infinity(c)
    if not pinf.exists:
        raise PolyMisuseError("the curve has no point at infinity")
    if pinf.r_inf == 0:
        return PInfinityReached(True, origin_status(c).times_reached)
    ri, ti = pinf.r_inf, pinf.theta_inf
    f = poly(c.A - c.B * _q(ri), T)
    g = poly(c.C - c.D * _q(ti), T)
    h = gcd_poly(f, g) if not (f.is_zero and g.is_zero) else None
    if h is None:
        raise InternalContradiction("constant curve reached the point at infinity")
    n = 0 if is_constant(h) else len(isolate_real_roots(h, T))
    # k != 0: theta(s) - theta_inf is algebraic, 2 k pi and (2k+1) pi are not
    return PInfinityReached(False, n, False)


def _q(x: Fraction):
    from sympy import Rational
    return Rational(x.numerator, x.denominator)


# ---------------------------------------------------------------------------
# close self-intersections and the global verdict


@dataclass
class InfinitudeVerdict:
    infinite: bool
    witness: str
    verdicts: dict  # 1 / 2 -> KBoundednessVerdict


def analyze_xi(c: PolarCurve, xi: XiCurve | None = None) -> InfinitudeVerdict:
    if bounded_on_reals(c.theta):
        # finitely many self-intersections; no feature needs the xi branches
        return InfinitudeVerdict(False, "theta bounded", {})
    xi = xi or xi_curves(build_system_polys(c))
    verdicts = {1: k_boundedness(xi.xi1), 2: k_boundedness(xi.xi2)}
    for i, v in verdicts.items():
        if not v.bounded:
            return InfinitudeVerdict(True, f"xi{i}: {v.tag}", verdicts)
    return InfinitudeVerdict(False, "xi1 and xi2 bounded in k", verdicts)


def has_infinitely_many_selfintersections(c: PolarCurve) -> tuple[bool, str]:
    if bounded_on_reals(c.theta):
        return False, "theta bounded"
    v = analyze_xi(c)
    return v.infinite, v.witness


def close_selfintersections(c: PolarCurve, t0, verdict: InfinitudeVerdict | None = None) -> bool:
    """Whether the feature generated by t0 carries infinitely many close
    self-intersections (t0 finite rational/RootBox, or +-inf)."""
    verdict = verdict or analyze_xi(c)
    if is_infinite_param(t0):
        sgn = 1 if t0 > 0 else -1
        return any(sgn in v.infinity_branches for v in verdict.verdicts.values())
    from .ratan import _as_box
    box = _as_box(t0)
    for v in verdict.verdicts.values():
        for vbox, _dirs in v.vertical_asymptotes:
            if not is_zero_at_root(poly(vbox.polynomial.as_expr(), T, P), box):
                continue
            if compare_values(box, vbox.lo) > 0 and compare_values(box, vbox.hi) < 0:
                return True
    return False
