"""Independent numeric cross-checks: brute-force self-intersections,
extrapolated limits and Sylvester-matrix resultants.

Nothing here is certified; the module exists so the exact machinery can be
compared against something that shares none of its code paths.
"""
from __future__ import annotations

import logging
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import mpmath
import numpy as np

from .config import OracleConfig
from .parse import PolarCurve, RationalFunction

log = logging.getLogger(__name__)

# relative to |point|: converged crossings reach ~1e-15, near-misses do not
NEWTON_RESIDUAL = 1e-10

# ---------------------------------------------------------------------------
# self-intersections


@dataclass(frozen=True)
class NumericIntersection:
    t: float
    s: float
    point: tuple[float, float]
    residual: float


def _horner(f: RationalFunction):
    n, d = f.coeffs()
    nf, df = [float(c) for c in n], [float(c) for c in d]

    def ev(t):
        if isinstance(t, np.ndarray):
            return np.polyval(nf, t) / np.polyval(df, t)
        a = b = 0.0
        for c in nf:
            a = a * t + c
        for c in df:
            b = b * t + c
        return a / b
    return ev


def _cartesian(c: PolarCurve):
    r, th = _horner(c.r), _horner(c.theta)
    dr, dth = _horner(c.r.deriv()), _horner(c.theta.deriv())

    def f(t):
        rr, tt = r(t), th(t)
        if isinstance(t, np.ndarray):
            return np.array([rr * np.cos(tt), rr * np.sin(tt)])
        return np.array([rr * math.cos(tt), rr * math.sin(tt)])

    def jac(t):
        rr, tt, d1, d2 = r(t), th(t), dr(t), dth(t)
        ct, st = math.cos(tt), math.sin(tt)
        return np.array([d1 * ct - rr * d2 * st, d1 * st + rr * d2 * ct])
    return f, jac


def _segment_hit(p0, p1, q0, q1):
    """Parameters (a, b) in [0, 1]^2 where the two segments cross, else None."""
    d1, d2 = p1 - p0, q1 - q0
    den = d1[0] * d2[1] - d1[1] * d2[0]
    if den == 0:
        return None
    w = q0 - p0
    a = (w[0] * d2[1] - w[1] * d2[0]) / den
    b = (w[0] * d1[1] - w[1] * d1[0]) / den
    eps = 1e-9
    if -eps <= a <= 1 + eps and -eps <= b <= 1 + eps:
        return a, b
    return None


def _cells_on_segment(p, q, cell: float, limit: int = 100000):
    """Grid cells crossed by the segment pq (Amanatides-Woo traversal)."""
    x0, y0 = p[0] / cell, p[1] / cell
    x1, y1 = q[0] / cell, q[1] / cell
    ix, iy = math.floor(x0), math.floor(y0)
    ex, ey = math.floor(x1), math.floor(y1)
    dx, dy = x1 - x0, y1 - y0
    sx, sy = (1 if dx > 0 else -1), (1 if dy > 0 else -1)
    tdx = abs(1 / dx) if dx else math.inf
    tdy = abs(1 / dy) if dy else math.inf
    tx = ((ix + (sx > 0)) - x0) / dx if dx else math.inf
    ty = ((iy + (sy > 0)) - y0) / dy if dy else math.inf
    out = [(ix, iy)]
    while (ix, iy) != (ex, ey) and len(out) < limit:
        if tx < ty:
            ix, tx = ix + sx, tx + tdx
        else:
            iy, ty = iy + sy, ty + tdy
        if min(tx, ty) > 1 + 1e-12 and (ix, iy) != (ex, ey):
            out.append((ex, ey))
            break
        out.append((ix, iy))
    return out


def _newton(f, jac, t, s, steps):
    best = math.inf
    for i in range(steps):
        F = f(t) - f(s)
        res = math.hypot(F[0], F[1])
        if not math.isfinite(res):
            return None
        if res < 1e-15 * (1 + abs(t) + abs(s)):
            break
        if i >= 12 and res > 0.5 * best:
            break  # not converging quadratically; hopeless seed
        best = min(best, res)
        J = np.column_stack([jac(t), -jac(s)])
        try:
            dt, ds = np.linalg.solve(J, -F)
        except (np.linalg.LinAlgError, ZeroDivisionError):
            return None
        t, s = t + dt, s + ds
    if not (math.isfinite(t) and math.isfinite(s)):
        return None
    try:
        F = f(t) - f(s)
    except (ZeroDivisionError, OverflowError):
        return None
    return t, s, float(math.hypot(F[0], F[1]))


def numeric_self_intersections(c: PolarCurve, t_range: tuple[float, float], n: int = 20000,
                               tau: float = 1e-4, cfg: OracleConfig | None = None,
                               rmax: float = 1e6, max_cell: int = 64) -> list[NumericIntersection]:
    """Brute-force self-intersections of the cartesian curve for t in t_range.

    The polyline through n samples is hashed by segment into a uniform grid;
    crossing segment pairs seed a Newton solve on phi(t) = phi(s).
    """
    cfg = cfg or OracleConfig()
    a, b = map(float, t_range)
    if not (math.isfinite(a) and math.isfinite(b)) or n < 1000:
        raise ValueError("need a finite range and n >= 1000")
    f, jac = _cartesian(c)
    t = np.linspace(a, b, n)
    with np.errstate(all="ignore"):
        pts = f(t).T
    ok = np.all(np.isfinite(pts), axis=1) & (np.hypot(pts[:, 0], pts[:, 1]) < rmax)
    seg_ok = ok[:-1] & ok[1:]
    lens = np.hypot(*(pts[1:] - pts[:-1]).T)
    seg_ok &= lens < 1.0  # segments jumping across poles are not curve pieces
    idx = np.nonzero(seg_ok)[0]
    if idx.size == 0:
        return []
    cell = max(tau, float(np.median(lens[idx])))
    grid = defaultdict(list)
    for i in idx:
        for key in _cells_on_segment(pts[i], pts[i + 1], cell):
            grid[key].append(i)
    sep = 10 * tau * (b - a) / n
    seen, found = set(), []
    dense = 0
    for members in grid.values():
        if len(members) > max_cell:
            # windings packed below the sampling resolution; no usable seeds here
            dense += 1
            continue
        for u in range(len(members)):
            for v in range(u + 1, len(members)):
                i, j = members[u], members[v]
                if abs(i - j) <= 1 or (i, j) in seen:
                    continue
                seen.add((i, j))
                hit = _segment_hit(pts[i], pts[i + 1], pts[j], pts[j + 1])
                if hit is None:
                    continue
                t0 = t[i] + hit[0] * (t[i + 1] - t[i])
                s0 = t[j] + hit[1] * (t[j + 1] - t[j])
                got = _newton(f, jac, t0, s0, cfg.newton_steps)
                if got is None:
                    continue
                tt, ss, res = got
                x, y = f(tt)
                if res > NEWTON_RESIDUAL * max(1.0, math.hypot(x, y)) or abs(tt - ss) <= sep or not (a <= tt <= b and a <= ss <= b):
                    continue
                tt, ss = min(tt, ss), max(tt, ss)
                if any(abs(tt - q.t) < cfg.match_tol and abs(ss - q.s) < cfg.match_tol for q in found):
                    continue
                x, y = f(tt)
                found.append(NumericIntersection(float(tt), float(ss), (float(x), float(y)), res))
    if dense:
        log.info("skipped %d grid cells with more than %d segments", dense, max_cell)
    return sorted(found, key=lambda q: (q.t, q.s))


# ---------------------------------------------------------------------------
# limits


@dataclass(frozen=True)
class LimitEstimate:
    value: float
    error: float
    diverged: bool = False


def _as_mp_callable(f) -> Callable:
    if isinstance(f, RationalFunction):
        n, d = f.coeffs()
        nm = [mpmath.mpf(c.numerator) / c.denominator for c in n]
        dm = [mpmath.mpf(c.numerator) / c.denominator for c in d]
        return lambda x: mpmath.polyval(nm, x) / mpmath.polyval(dm, x)
    return f


def numeric_limit(f, t0, side: str = "+", schedule: Sequence[float] | None = None,
                  levels: int = 12, dps: int = 50) -> LimitEstimate:
    """Limit of f at t0 (finite or +-inf) by Richardson extrapolation.

    Samples f at t0 +- h_j (or +-1/h_j at infinity) for the geometric
    schedule h_j = 2^-j and eliminates the leading powers of h.
    """
    g = _as_mp_callable(f)
    with mpmath.workdps(dps):
        hs = [mpmath.mpf(h) for h in schedule] if schedule is not None else \
            [mpmath.mpf(2) ** -(j + 4) for j in range(levels)]
        if isinstance(t0, float) and math.isinf(t0):
            pts = [(1 / h if t0 > 0 else -1 / h) for h in hs]
        else:
            sgn = 1 if side == "+" else -1
            pts = [mpmath.mpf(t0) + sgn * h for h in hs]
        vals = []
        for x in pts:
            try:
                vals.append(mpmath.mpf(g(x)))
            except ZeroDivisionError:
                vals.append(mpmath.inf)
        if any(not mpmath.isfinite(v) for v in vals):
            return LimitEstimate(math.inf, math.inf, True)
        # Neville-style table; exact powers of the step ratio
        table = [vals]
        ratio = hs[0] / hs[1]
        for order in range(1, len(vals)):
            prev = table[-1]
            fac = ratio ** order
            table.append([(fac * prev[i + 1] - prev[i]) / (fac - 1) for i in range(len(prev) - 1)])
        best = table[-1][0]
        err = abs(table[-1][0] - table[-2][-1])
        # a convergent sequence cannot keep growing geometrically
        mags = [abs(v) for v in vals[-4:]]
        growing = all(q > 1.5 * p for p, q in zip(mags, mags[1:]) if p > 0) and mags[-1] > 1e3
        if growing:
            return LimitEstimate(float(vals[-1]), math.inf, True)
        return LimitEstimate(float(best), float(err), False)


# ---------------------------------------------------------------------------
# resultants


def _det(m: list[list[Fraction]]) -> Fraction:
    """Fraction-exact determinant by Gaussian elimination."""
    m = [row[:] for row in m]
    n, det = len(m), Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, n):
            if m[r][col]:
                k = m[r][col] / m[col][col]
                m[r] = [a - k * b for a, b in zip(m[r], m[col])]
    return det


def sylvester_matrix(f: Sequence[Fraction], g: Sequence[Fraction]) -> list[list[Fraction]]:
    """Coefficients highest degree first."""
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([Fraction(0)] * i + list(map(Fraction, f)) + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + list(map(Fraction, g)) + [Fraction(0)] * (size - n - 1 - i))
    return rows


def sylvester_resultant(f: Sequence[Fraction], g: Sequence[Fraction]) -> Fraction:
    f, g = _strip(f), _strip(g)
    if not f or not g:
        return Fraction(0)
    if len(f) == 1 and len(g) == 1:
        return Fraction(1)
    return _det(sylvester_matrix(f, g))


def _strip(cs: Sequence[Fraction]) -> list[Fraction]:
    cs = [Fraction(c) for c in cs]
    while cs and cs[0] == 0:
        cs.pop(0)
    return cs


def resultant_at(f, g, var, point: dict) -> Fraction:
    """Res_var(f, g) evaluated by substituting ``point`` first.

    Only valid where the leading coefficients in ``var`` do not vanish.
    """
    from sympy import Rational

    def reduce(h):
        vals = {v: Rational(q.numerator, q.denominator) for v, q in point.items() if v in h.gens}
        h = h.eval(vals) if vals else h
        return [Fraction(int(c.p), int(c.q)) for c in h.all_coeffs()]

    return sylvester_resultant(reduce(_in(f, var)), reduce(_in(g, var)))


def _in(f, var):
    """``f`` with ``var`` as its last generator, so evaluation leaves it univariate."""
    from sympy import Poly
    gens = [g for g in f.gens if g != var] + [var]
    return Poly(f.as_expr(), *gens)


# ---------------------------------------------------------------------------
# agreement report used by ``polares --verify``


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str

    def line(self) -> str:
        return f"verify {'ok  ' if self.ok else 'FAIL'} {self.name}: {self.detail}"


def match_intersections(numeric: list[NumericIntersection], symbolic: list[tuple[float, float]],
                        tol: float) -> tuple[int, list, list]:
    """Greedy bijective matching of unordered (t, s) pairs within ``tol``."""
    left = list(symbolic)
    matched, unmatched = 0, []
    for q in numeric:
        hit = next((p for p in left if abs(p[0] - q.t) < tol and abs(p[1] - q.s) < tol), None)
        if hit is None:
            unmatched.append(q)
        else:
            left.remove(hit)
            matched += 1
    return matched, unmatched, left


def symbolic_pairs(solutions, lo: float, hi: float) -> list[tuple[float, float]]:
    out = []
    for sol in solutions:
        t, s = sorted((sol.t_mid, sol.s_mid))
        if lo <= t <= hi and lo <= s <= hi and (t, s) not in out:
            out.append((t, s))
    return out


def cross_check(an, cfg: OracleConfig | None = None, t_range=(-50.0, 50.0)) -> list[Check]:
    from .ratan import rational_value

    cfg = cfg or OracleConfig()
    c, checks = an.curve, []
    pinf = an.p_inf
    if pinf.exists:
        for name, f, want in (("r at infinity", c.r, pinf.r_inf), ("theta at infinity", c.theta, pinf.theta_inf)):
            est = numeric_limit(f, math.inf)
            ok = not est.diverged and abs(est.value - float(want)) < cfg.limit_tol
            checks.append(Check(name, ok, f"exact {want}, numeric {est.value:.12g}"))
    for feat in an.features:
        side = feat.sides[0] if feat.sides else "+"
        t0 = feat.t0 if isinstance(feat.t0, float) else float(feat.t0)
        if feat.kind == "limit_circle":
            est = numeric_limit(c.r, t0, side)
            ok = not est.diverged and abs(est.value - float(feat.r0)) < cfg.limit_tol
            checks.append(Check(f"limit circle radius at t={t0:g}", ok,
                                f"exact {feat.r0}, numeric {est.value:.12g}"))
        elif feat.kind == "asymptote" and rational_value(feat.alpha) is not None:
            al = rational_value(feat.alpha)
            g = _as_mp_callable(c.r)
            h = _as_mp_callable(c.theta)
            est = numeric_limit(lambda x: g(x) * (h(x) - mpmath.mpf(al.numerator) / al.denominator), t0, side)
            want = float(feat.delta)
            ok = not est.diverged and abs(est.value - want) < cfg.limit_tol * max(1.0, abs(want))
            checks.append(Check(f"asymptote distance at t={t0:g}", ok,
                                f"exact {_show(feat.delta)}, numeric {est.value:.12g}"))
    lo, hi = t_range
    numeric = numeric_self_intersections(c, t_range, cfg.samples, cfg.tau, cfg)
    if an.infinitude.infinite:
        checks.append(Check("self-intersections", len(numeric) > 0,
                            f"infinitely many; {len(numeric)} numeric crossings in [{lo:g}, {hi:g}]"))
        return checks
    sols = [s for summary in an.systems.values() for s in summary.solutions]
    symbolic = symbolic_pairs(sols, lo, hi)
    # crossings at the origin come from zeros of r, not from the k-systems
    numeric = [q for q in numeric if math.hypot(*q.point) > cfg.match_tol]
    matched, extra, missing = match_intersections(numeric, symbolic, cfg.match_tol)
    ok = not extra and not missing
    checks.append(Check("self-intersections", ok,
                        f"{matched} matched, {len(extra)} numeric-only, {len(missing)} symbolic-only "
                        f"in [{lo:g}, {hi:g}]"))
    return checks


def _show(v) -> str:
    return str(v) if isinstance(v, Fraction) else f"{float(v):.12g}"
