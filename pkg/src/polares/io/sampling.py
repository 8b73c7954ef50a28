"""Adaptive polyline sampling of parameter intervals."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..config import AnalysisConfig
from ..parse import PolarCurve
from ..planner import PlotInterval

INITIAL = 257
# open-interval guard so endpoints that are poles never get evaluated
EDGE = 1e-9


def polar_to_cartesian(r, theta):
    """(r cos theta, r sin theta); works on scalars and arrays."""
    if np.ndim(r) == 0 and np.ndim(theta) == 0:
        return float(r) * math.cos(theta), float(r) * math.sin(theta)
    r, theta = np.asarray(r, float), np.asarray(theta, float)
    return r * np.cos(theta), r * np.sin(theta)


@dataclass
class PlotArtifact:
    interval: tuple[float, float]
    color: str
    t: np.ndarray
    r: np.ndarray
    theta: np.ndarray
    polylines: list[np.ndarray]  # each (n, 2), cartesian
    under_resolved: bool = False
    metadata: dict = field(default_factory=dict)

    @property
    def x(self) -> np.ndarray:
        return self.r * np.cos(self.theta)

    @property
    def y(self) -> np.ndarray:
        return self.r * np.sin(self.theta)

    def max_norm(self) -> float:
        if not self.polylines:
            return 0.0
        return max(float(np.hypot(p[:, 0], p[:, 1]).max()) for p in self.polylines)


class _Param:
    """Maps a sampling variable u onto t; the full line uses t = u/(1-u^2)."""

    def __init__(self, a: float, b: float):
        self.full = math.isinf(a) and math.isinf(b)
        if self.full:
            self.lo, self.hi = -1.0 + EDGE, 1.0 - EDGE
        else:
            if math.isinf(a) or math.isinf(b):
                raise ValueError("half-infinite intervals must be bordered first")
            pad = EDGE * max(1.0, b - a)
            self.lo, self.hi = a + pad, b - pad

    def __call__(self, u: np.ndarray) -> np.ndarray:
        if self.full:
            return u / (1.0 - u * u)
        return u


def _evaluate(c: PolarCurve, t: np.ndarray):
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        r = np.asarray(c.r.numeric()(t), float)
        th = np.asarray(c.theta.numeric()(t), float)
    return r, th


def _needs_split(x, y, r, th, tol, max_dtheta):
    dx, dy = np.diff(x), np.diff(y)
    chord = np.hypot(dx, dy)
    dth = np.abs(np.diff(th))
    rad = np.maximum(np.abs(r[:-1]), np.abs(r[1:]))
    # winding only matters where it moves the point visibly
    wind = (dth > max_dtheta) & (rad * dth > tol)
    bad = ~np.isfinite(chord)
    return ((chord > tol) | wind) & ~bad


def _split_polylines(x, y, r, rcap) -> list[np.ndarray]:
    ok = np.isfinite(x) & np.isfinite(y) & (np.abs(r) <= rcap)
    out, start = [], None
    for i, good in enumerate(ok):
        if good and start is None:
            start = i
        elif not good and start is not None:
            if i - start >= 2:
                out.append(np.column_stack([x[start:i], y[start:i]]))
            start = None
    if start is not None and len(ok) - start >= 2:
        out.append(np.column_stack([x[start:], y[start:]]))
    return out


def _viewport_diag(x, y, r, rcap) -> float | None:
    vis = np.isfinite(x) & np.isfinite(y) & (np.abs(r) <= rcap)
    if vis.sum() < 2:
        return None
    return math.hypot(np.ptp(x[vis]), np.ptp(y[vis]))


def sample_interval(c: PolarCurve, interval: PlotInterval | tuple, config: AnalysisConfig | None = None,
                    budget: int | None = None, diag: float | None = None) -> PlotArtifact:
    """Refine until every drawn chord is below ``chord_tol * diag``.

    ``diag`` defaults to the diagonal of this interval's own coarse bounding box.
    """
    config = config or AnalysisConfig()
    budget = budget or config.budget
    rcap = float(config.rcap)
    if isinstance(interval, PlotInterval):
        a, b = interval.bounds
        color = interval.color
        meta = {
            "a": a, "b": b,
            "a_provenance": list(interval.a_marker.provenance) if interval.a_marker else [],
            "b_provenance": list(interval.b_marker.provenance) if interval.b_marker else [],
            "caps_ok": interval.caps_ok,
        }
    else:
        a, b = map(float, interval)
        color, meta = "neutral", {"a": a, "b": b}
    param = _Param(a, b)
    u = np.linspace(param.lo, param.hi, min(INITIAL, budget))
    t = param(u)
    r, th = _evaluate(c, t)
    x, y = polar_to_cartesian(r, th)

    if diag is None:
        diag = _viewport_diag(x, y, r, rcap) or 1.0
    tol = config.chord_tol * max(diag, 1e-9)

    under = False
    while True:
        split = _needs_split(x, y, r, th, tol, config.max_dtheta)
        # segments lying fully outside the caps are not drawn
        split &= (np.abs(r[:-1]) <= rcap) | (np.abs(r[1:]) <= rcap)
        idx = np.nonzero(split)[0]
        if idx.size == 0:
            break
        room = budget - u.size
        if room <= 0:
            under = True
            break
        if idx.size > room:
            idx = idx[:room]
            under = True
        um = (u[idx] + u[idx + 1]) / 2
        if np.any(um == u[idx]):
            break  # reached float resolution
        tm = param(um)
        rm, thm = _evaluate(c, tm)
        xm, ym = polar_to_cartesian(rm, thm)
        pos = idx + 1
        u, t = np.insert(u, pos, um), np.insert(t, pos, tm)
        r, th = np.insert(r, pos, rm), np.insert(th, pos, thm)
        x, y = np.insert(x, pos, xm), np.insert(y, pos, ym)
        if under:
            break
    return PlotArtifact((a, b), color, t, r, th, _split_polylines(x, y, r, rcap), under, meta)


def sample_plan(c: PolarCurve, plan, config: AnalysisConfig | None = None,
                workers: int = 4) -> list[PlotArtifact]:
    """Sample every interval of ``plan`` against one shared viewport."""
    config = config or AnalysisConfig()
    rcap = float(config.rcap)
    xs, ys, rs = [], [], []
    for iv in plan.intervals:
        param = _Param(*iv.bounds)
        r, th = _evaluate(c, param(np.linspace(param.lo, param.hi, INITIAL)))
        x, y = polar_to_cartesian(r, th)
        xs.append(x), ys.append(y), rs.append(r)
    diag = None
    if xs:
        diag = _viewport_diag(np.concatenate(xs), np.concatenate(ys), np.concatenate(rs), rcap)
    # intervals are independent; map() keeps the output order deterministic
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        return list(pool.map(lambda iv: sample_interval(c, iv, config, diag=diag), plan.intervals))
