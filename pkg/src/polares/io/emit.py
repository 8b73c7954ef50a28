"""Writers for the text, JSON, SVG and CSV outputs."""
from __future__ import annotations

import csv
import math
from pathlib import Path
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from .report import AnalysisReport, render_text, to_json
from .sampling import PlotArtifact

FORMATS = ("text", "json", "svg", "csv")
COLORS = {"red": "#d62728", "blue": "#1f77b4", "neutral": "#7f7f7f"}
SIZE = 600
MARGIN = 20


def _fmt(x: float) -> str:
    return f"{x:.6f}".rstrip("0").rstrip(".")


def _bounds(artifacts: list[PlotArtifact]) -> tuple[float, float, float, float]:
    pts = [p for a in artifacts for p in a.polylines]
    if not pts:
        return -1.0, -1.0, 1.0, 1.0
    allp = np.vstack(pts)
    x0, y0 = allp.min(axis=0)
    x1, y1 = allp.max(axis=0)
    if x1 - x0 < 1e-12:
        x0, x1 = x0 - 1, x1 + 1
    if y1 - y0 < 1e-12:
        y0, y1 = y0 - 1, y1 + 1
    return float(x0), float(y0), float(x1), float(y1)


def _interval_label(a: PlotArtifact) -> str:
    lo, hi = a.interval
    side = lambda v: "infinity" if v == math.inf else "-infinity" if v == -math.inf else f"{v:.6g}"  # noqa: E731
    return f"t in ({side(lo)}, {side(hi)})"


def _provenance(a: PlotArtifact) -> str:
    tags = sorted(set(a.metadata.get("a_provenance", [])) | set(a.metadata.get("b_provenance", [])))
    return ", ".join(tags) if tags else "window"


def render_svg(artifacts: list[PlotArtifact], title: str = "", legend: bool = True) -> str:
    x0, y0, x1, y1 = _bounds(artifacts)
    scale = (SIZE - 2 * MARGIN) / max(x1 - x0, y1 - y0)
    legend_h = 18 * len(artifacts) + 10 if legend else 0

    def tx(p):
        return MARGIN + (p[:, 0] - x0) * scale, MARGIN + (y1 - p[:, 1]) * scale

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" '
        f'height="{SIZE + legend_h}" viewBox="0 0 {SIZE} {SIZE + legend_h}">',
        f"<title>{escape(title)}</title>",
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    # axes through the origin when visible
    if x0 <= 0 <= x1:
        ax = _fmt(MARGIN - x0 * scale)
        out.append(f'<line x1="{ax}" y1="0" x2="{ax}" y2="{SIZE}" stroke="#dddddd" stroke-width="1"/>')
    if y0 <= 0 <= y1:
        ay = _fmt(MARGIN + y1 * scale)
        out.append(f'<line x1="0" y1="{ay}" x2="{SIZE}" y2="{ay}" stroke="#dddddd" stroke-width="1"/>')
    for i, a in enumerate(artifacts):
        color = COLORS.get(a.color, "#000000")
        # one path per interval; pieces split at the caps become subpaths
        d = []
        for p in a.polylines:
            xs, ys = tx(p)
            d.append("M" + " L".join(f"{_fmt(x)},{_fmt(y)}" for x, y in zip(xs, ys)))
        out.append(f'<path id="interval-{i}" d={quoteattr(" ".join(d))} fill="none" '
                   f'stroke="{color}" stroke-width="1"><title>{escape(_interval_label(a))}</title></path>')
    if legend:
        out.append('<g id="legend" font-family="monospace" font-size="12">')
        for i, a in enumerate(artifacts):
            y = SIZE + 14 + 18 * i
            color = COLORS.get(a.color, "#000000")
            flag = " (under-resolved)" if a.under_resolved else ""
            out.append(f'<line x1="{MARGIN}" y1="{y - 4}" x2="{MARGIN + 20}" y2="{y - 4}" '
                       f'stroke="{color}" stroke-width="2"/>')
            out.append(f'<text x="{MARGIN + 28}" y="{y}">'
                       f"{escape(_interval_label(a))}: {escape(_provenance(a))}{flag}</text>")
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_csv(artifacts: list[PlotArtifact], path: Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "r", "theta", "x", "y"])
        for a in artifacts:
            x, y = a.x, a.y
            for row in zip(a.t, a.r, a.theta, x, y):
                if all(math.isfinite(v) for v in row):
                    w.writerow([repr(float(v)) for v in row])


def emit(report: AnalysisReport, artifacts: list[PlotArtifact], formats, out_dir) -> list[Path]:
    """Write the requested formats into ``out_dir``; returns the written paths."""
    formats = list(FORMATS) if formats in ("all", ["all"]) else list(formats)
    bad = set(formats) - set(FORMATS)
    if bad:
        raise ValueError(f"unknown formats: {sorted(bad)}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if "text" in formats:
        p = out / "report.txt"
        p.write_text(render_text(report))
        written.append(p)
    if "json" in formats:
        p = out / "report.json"
        p.write_text(to_json(report))
        written.append(p)
    if "svg" in formats:
        title = f"r = {report.curve['r']}, theta = {report.curve['theta']}"
        for i, a in enumerate(artifacts):
            p = out / f"interval_{i:02d}.svg"
            p.write_text(render_svg([a], f"{title}; {_interval_label(a)}"))
            written.append(p)
        p = out / "combined.svg"
        p.write_text(render_svg(artifacts, title))
        written.append(p)
    if "csv" in formats:
        p = out / "samples.csv"
        write_csv(artifacts, p)
        written.append(p)
    return written
