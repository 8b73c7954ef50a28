"""Sampling, reports and file output."""
from .emit import emit, render_svg, write_csv
from .report import AnalysisReport, build_report, from_json, render_text, to_json
from .sampling import PlotArtifact, polar_to_cartesian, sample_interval, sample_plan

__all__ = [
    "AnalysisReport", "PlotArtifact", "build_report", "emit", "from_json", "polar_to_cartesian",
    "render_svg", "render_text", "sample_interval", "sample_plan", "to_json", "write_csv",
]
