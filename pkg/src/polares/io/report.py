"""Analysis report: a JSON-friendly record plus the plain-text rendering."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction

from ..analysis import Analysis
from ..exactpoly import RootBox
from ..ratan import rational_value

SCHEMA_VERSION = 1

CASE_LINES = {
    "both_bounded": "r and theta both bounded",
    "theta_bounded_r_unbounded": "r unbounded and theta bounded",
    "r_bounded_theta_unbounded": "r bounded and theta unbounded",
    "both_unbounded": "r and theta both unbounded",
}


# ---------------------------------------------------------------------------
# value encoding: every exact quantity becomes {"exact": str, "approx": float|None}


def encode_value(v) -> dict | None:
    if v is None:
        return None
    if isinstance(v, float) and math.isinf(v):
        return {"exact": "infinity" if v > 0 else "-infinity", "approx": None}
    if isinstance(v, int):
        v = Fraction(v)
    if isinstance(v, Fraction):
        return {"exact": str(v), "approx": float(v)}
    if isinstance(v, RootBox):
        if v.exact is not None:
            return encode_value(v.exact)
        b = v.refine(Fraction(1, 2**64))
        return {"exact": f"RootOf({b.polynomial.as_expr()}, [{b.lo}, {b.hi}])",
                "approx": float((b.lo + b.hi) / 2)}
    q = rational_value(v)
    if q is not None:
        return encode_value(q)
    raise TypeError(f"cannot encode {type(v).__name__}")


def _out(x: Fraction, down: bool) -> float:
    f = float(x)
    if down and Fraction(f) > x:
        f = math.nextafter(f, -math.inf)
    if not down and Fraction(f) < x:
        f = math.nextafter(f, math.inf)
    return f


def _box(iv) -> list[float]:
    return [_out(iv.lo, True), _out(iv.hi, False)]


# ---------------------------------------------------------------------------


@dataclass
class AnalysisReport:
    curve: dict
    case: str
    p_infinity: dict
    origin: dict
    self_intersections: dict
    features: list
    markers: list
    plan: dict
    config: dict
    schema: int = SCHEMA_VERSION
    warnings: list = field(default_factory=list)

    @property
    def case_line(self) -> str:
        return CASE_LINES[self.case]


def _config_dict(cfg) -> dict:
    return {
        "rcap": str(cfg.rcap), "thetacap_pi": str(cfg.thetacap_pi), "kcap": cfg.kcap,
        "precision": cfg.precision, "budget": cfg.budget,
        "chord_tol": cfg.chord_tol, "max_dtheta": cfg.max_dtheta,
    }


def _p_infinity(an: Analysis) -> dict:
    pinf = an.p_inf
    if not pinf.exists:
        return {"exists": False}
    out = {
        "exists": True,
        "r": str(pinf.r_inf), "theta": str(pinf.theta_inf),
        "cartesian": [_box(pinf.cartesian[0]), _box(pinf.cartesian[1])],
    }
    rr = an.p_inf_reached
    out["reached"] = {
        "origin_case": rr.origin_case,
        "k0_count": int(rr.k0_count),
        "k_nonzero_possible": rr.k_nonzero_possible,
    }
    return out


def _system(summary) -> dict:
    d = {
        "infinite": summary.infinite,
        "verified_k": [int(k) for k in summary.verified_k],
        "solutions": [
            {"k": int(s.k), "t": _box(s.t), "s": _box(s.s), "certified": s.certified}
            for s in summary.solutions
        ],
    }
    if summary.candidates is not None:
        cand = summary.candidates
        d["candidates"] = {"lo": int(cand.lo), "hi": int(cand.hi),
                           "values": [int(k) for k in cand.values], "source": cand.source}
    else:
        d["candidates"] = None
    return d


def _feature(f) -> dict:
    d = {
        "kind": f.kind,
        "t0": encode_value(f.t0),
        "sides": list(f.sides),
        "close_selfint": f.close_selfint,
    }
    if f.kind == "limit_circle":
        d["r0"] = encode_value(f.r0)
    if f.kind == "spiral_branch":
        d["r_sign"] = int(f.r_sign)
    if f.kind == "asymptote":
        d["alpha"] = encode_value(f.alpha)
        d["delta"] = encode_value(f.delta)
        d["line"] = f.line()
    else:
        d["theta_signs"] = [int(x) for x in f.theta_signs]
    return d


def _plan(p) -> dict:
    return {
        "intervals": [
            {
                "a": encode_value(iv.a), "b": encode_value(iv.b), "color": iv.color,
                "a_provenance": list(iv.a_marker.provenance) if iv.a_marker else [],
                "b_provenance": list(iv.b_marker.provenance) if iv.b_marker else [],
                "bordered": list(iv.bordered), "caps_ok": iv.caps_ok,
            }
            for iv in p.intervals
        ],
        "full_line": len(p.intervals) == 1 and p.intervals[0].full_line,
    }


def build_report(an: Analysis) -> AnalysisReport:
    c = an.curve
    origin = {
        "parameters": [encode_value(v) for v in an.origin.parameters],
        "times_reached": int(an.origin.times_reached),
        "p_infinity_contributes": an.origin.p_infinity_contributes,
        "self_intersection": an.origin.is_self_intersection,
    }
    selfint = {
        "infinite": an.infinitude.infinite,
        "witness": an.infinitude.witness,
        "systems": {str(k): _system(v) for k, v in an.systems.items()},
    }
    markers = [
        {"value": encode_value(m.value), "provenance": list(m.provenance)}
        for m in an.plan.display_markers()
    ]
    return AnalysisReport(
        curve={"r": str(c.r), "theta": str(c.theta)},
        case=an.case,
        p_infinity=_p_infinity(an),
        origin=origin,
        self_intersections=selfint,
        features=[_feature(f) for f in an.features],
        markers=markers,
        plan=_plan(an.plan),
        config=_config_dict(an.config),
        warnings=list(an.plan.warnings),
    )


# ---------------------------------------------------------------------------
# JSON


def to_json(report: AnalysisReport) -> str:
    return json.dumps(asdict(report), sort_keys=True, indent=2, allow_nan=False) + "\n"


def from_json(text: str) -> AnalysisReport:
    data = json.loads(text)
    names = {f.name for f in fields(AnalysisReport)}
    unknown = set(data) - names
    if unknown:
        raise ValueError(f"unknown report fields: {sorted(unknown)}")
    return AnalysisReport(**data)


# ---------------------------------------------------------------------------
# text


def fmt_number(v: dict | None, trailing_dot: bool = True) -> str:
    """Float-style numeral: "5." for integers, "infinity" for +inf."""
    if v["approx"] is None:
        return v["exact"]
    q = None
    try:
        q = Fraction(v["exact"])
    except ValueError:
        pass
    if q is not None and q.denominator == 1:
        return f"{q.numerator}." if trailing_dot else str(q.numerator)
    s = f"{v['approx']:.10g}"
    return s


def _listing(values: list[dict], braces: str = "[]") -> str:
    return braces[0] + ", ".join(fmt_number(v) for v in values) + braces[1]


def _sort_key(v: dict) -> float:
    if v["approx"] is None:
        return math.inf if v["exact"] == "infinity" else -math.inf
    return v["approx"]


def _generators(report: AnalysisReport, kind: str) -> list[dict]:
    vals: list[dict] = []
    for f in report.features:
        if f["kind"] == kind and f["t0"] not in vals:
            vals.append(f["t0"])
    return sorted(vals, key=_sort_key)


def _k_range(ks: list[int], system: int) -> str:
    lo, hi = min(ks), max(ks)
    full = set(range(lo, hi + 1))
    if set(ks) == full:
        return f"[[ {lo},{hi}]]"
    if system == 1 and set(ks) == full - {0}:
        return f"[[ {lo},{hi}]], k<>0"
    return "{" + ", ".join(map(str, sorted(ks))) + "}"


def _p_infinity_lines(report: AnalysisReport) -> list[str]:
    pinf = report.p_infinity
    if not pinf["exists"]:
        return ["There is no point at infinity"]
    r, th = pinf["r"], pinf["theta"]
    if Fraction(r) == 0:
        pt = "[0, 0]"
    elif Fraction(th) == 0:
        pt = f"[{r}, 0]"
    else:
        scale = "" if Fraction(r) == 1 else f"{r}*"
        pt = f"[{scale}cos({th}), {scale}sin({th})]"
    lines = [f"Real point at the infinity such that (r, theta)=[{r}, {th}] and the point is {pt}"]
    reached = pinf["reached"]
    if reached["origin_case"]:
        n = reached["k0_count"]
        if n == 0:
            lines.append("The point at infinity (0,0) is not reached in R")
        else:
            line = f"The point at infinity (0,0) is reached {n} times in R"
            if report.origin["self_intersection"]:
                line += ", so self-intersection at the origen"
            lines.append(line)
    else:
        n = reached["k0_count"]
        lines.append("Point at infinity is not reached with k=0" if n == 0
                     else f"Point at infinity is reached {n} times with k=0")
        lines.append("Point at infinity is reached with k<>0" if reached["k_nonzero_possible"]
                     else "Point at infinity is not reached with k<>0")
    return lines


def _origin_lines(report: AnalysisReport) -> list[str]:
    o = report.origin
    if o["p_infinity_contributes"] or o["times_reached"] < 2:
        return []
    return [f"The origin is reached {o['times_reached']} times in R, so self-intersection at the origen"]


def _selfint_lines(report: AnalysisReport) -> list[str]:
    si = report.self_intersections
    if si["infinite"]:
        lines = ["There are infinitely many self-intersections"]
        close, at_inf = [], False
        for f in report.features:
            if not f.get("close_selfint"):
                continue
            if f["t0"]["approx"] is None:
                at_inf = True
            elif f["t0"] not in close:
                close.append(f["t0"])
        for v in sorted(close, key=_sort_key):
            lines.append(f"t={fmt_number(v, trailing_dot=False)} has infinitely many close self-intersections")
        if at_inf:
            lines.append("t=infinity has infinitely many close self-intersections")
        return lines
    lines, notes = [], []
    for key, label in (("1", "System (1) gives self-intersections for  k in "),
                       ("2", "System (2) gives self-intersections for k in ")):
        sysd = si["systems"][key]
        ks = sysd["verified_k"]
        if ks:
            lines.append(label + _k_range(ks, int(key)))
        cand = sysd["candidates"]
        if cand and cand["values"] and (not ks or (cand["lo"], cand["hi"]) != (min(ks), max(ks))):
            notes.append(f"Candidate bound for system ({key}): k in [[ {cand['lo']},{cand['hi']}]]")
    return lines + notes


def _kind_lines(report: AnalysisReport, kind: str) -> list[str]:
    vals = _generators(report, kind)
    if kind == "limit_circle":
        return [f"Values of t generating limit circles {_listing(vals)}" if vals
                else "There are no limit circles"]
    if kind == "limit_point":
        return [f"Values of t generating limit points {_listing(vals)}" if vals
                else "There are no limit points"]
    if kind == "spiral_branch":
        return [f"Values of t generating spiral branches {_listing(vals)}" if vals
                else "There are no spiral branches"]
    if not vals:
        return ["There are not values of t generating asymptotes"]
    if all(v["approx"] is None for v in vals):
        lines = [f"Values of t generating asymptotes {_listing(vals)}"]
    else:
        lines = [f"The values of t generating asymptotes are {_listing(vals, '{}')}"]
    for f in report.features:
        if f["kind"] == "asymptote":
            side = "".join(f["sides"])
            where = f"t={fmt_number(f['t0'])}" + (f" ({side})" if side and side != "-+" else "")
            lines.append(f"Asymptote at {where}: {f['line']}")
    return lines


def _marker_line(report: AnalysisReport) -> list[str]:
    if report.plan["full_line"] or not report.markers:
        return []
    vals = sorted((m["value"] for m in report.markers), key=_sort_key)
    return [f"Values of t considered in the plot {_listing(vals, '{}')}"]


def render_text(report: AnalysisReport) -> str:
    lines = [report.case_line]
    lines += _p_infinity_lines(report)
    lines += _origin_lines(report)
    case = report.case
    if case == "both_bounded":
        lines += _selfint_lines(report)
    elif case == "theta_bounded_r_unbounded":
        lines += _selfint_lines(report)
        lines += _kind_lines(report, "asymptote")
    elif case == "r_bounded_theta_unbounded":
        lines += _kind_lines(report, "limit_circle")
        lines += _selfint_lines(report)
        lines += _kind_lines(report, "limit_point")
    else:
        for kind in ("limit_circle", "limit_point", "spiral_branch", "asymptote"):
            lines += _kind_lines(report, kind)
        lines += _selfint_lines(report)
    lines += _marker_line(report)
    for w in report.warnings:
        lines.append(f"Warning: {w}")
    return "\n".join(lines) + "\n"
