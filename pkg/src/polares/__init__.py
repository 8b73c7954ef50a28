"""Exact analysis of plane curves given by rational polar parametrizations."""
from .analysis import Analysis, analyze
from .config import AnalysisConfig, OracleConfig
from .parse import CurveValidationError, ParseError, PolarCurve, parse_curve
from .selfint import InternalContradiction

__version__ = "0.1.0"

__all__ = [
    "Analysis", "AnalysisConfig", "CurveValidationError", "InternalContradiction", "OracleConfig",
    "ParseError", "PolarCurve", "analyze", "parse_curve",
]
