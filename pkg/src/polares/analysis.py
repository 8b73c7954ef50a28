"""End-to-end analysis of one curve."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .config import AnalysisConfig
from .exactpoly import working_precision
from .features import Feature, detect_features
from .parse import PolarCurve
from .planner import PlotPlan, border_margins, classify_case, plan
from .ratan import PInfinity, point_at_infinity
from .selfint import (
    CandidateRange,
    InfinitudeVerdict,
    OriginReport,
    PInfinityReached,
    Solution,
    SystemPolys,
    XiCurve,
    _has_real_point,
    analyze_xi,
    build_system_polys,
    integer_k_candidates,
    origin_status,
    p_infinity_reached,
    solve_system,
    xi_curves,
)

log = logging.getLogger(__name__)


@dataclass
class SystemSummary:
    system: int
    infinite: bool
    candidates: CandidateRange | None = None
    verified_k: list[int] = field(default_factory=list)
    solutions: list[Solution] = field(default_factory=list)


@dataclass
class Analysis:
    curve: PolarCurve
    config: AnalysisConfig
    case: str
    p_inf: PInfinity
    p_inf_reached: PInfinityReached | None
    origin: OriginReport
    system_polys: SystemPolys
    xi: XiCurve
    infinitude: InfinitudeVerdict
    systems: dict[int, SystemSummary]
    features: list[Feature]
    plan: PlotPlan


def _solve_range(c, system, ks, sysp) -> tuple[list[int], list[Solution]]:
    verified, sols = [], []
    for k in ks:
        found = solve_system(c, k, system, sysp)
        if found:
            verified.append(k)
            sols.extend(found)
    return verified, sols


def summarize_system(c: PolarCurve, system: int, sysp: SystemPolys, xi: XiCurve,
                     infinitude: InfinitudeVerdict, kcap: int) -> SystemSummary:
    verdict = infinitude.verdicts.get(system)
    if verdict is not None and not verdict.bounded:
        # infinite family: only |k| <= kcap is solved, for plot markers
        curve = xi.xi1 if system == 1 else xi.xi2
        ks = [k for k in range(-kcap, kcap + 1)
              if not (system == 1 and k == 0) and _has_real_point(curve, k)]
        verified, sols = _solve_range(c, system, ks, sysp)
        return SystemSummary(system, True, None, verified, sols)
    cand = integer_k_candidates(c, system, xi, verdict)
    verified, sols = _solve_range(c, system, cand.values, sysp)
    return SystemSummary(system, False, cand, verified, sols)


def analyze(c: PolarCurve, config: AnalysisConfig | None = None) -> Analysis:
    config = config or AnalysisConfig()
    with working_precision(config.precision):
        return _analyze(c, config)


def _analyze(c: PolarCurve, config: AnalysisConfig) -> Analysis:
    case = classify_case(c)
    log.info("case: %s", case)
    pinf = point_at_infinity(c)
    reached = p_infinity_reached(c) if pinf.exists else None
    origin = origin_status(c)
    sysp = build_system_polys(c)
    xi = xi_curves(sysp)
    infinitude = analyze_xi(c, xi)
    systems = {s: summarize_system(c, s, sysp, xi, infinitude, config.kcap) for s in (1, 2)}
    features = detect_features(c, infinitude)
    p = plan(c, features, case)
    p = border_margins(p, c, config.rcap, config.thetacap_pi)
    return Analysis(c, config, case, pinf, reached, origin, sysp, xi, infinitude,
                    systems, features, p)
