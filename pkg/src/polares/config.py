"""Run configuration."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction


@dataclass(frozen=True)
class AnalysisConfig:
    rcap: Fraction = Fraction(50)
    # theta cap in multiples of pi (40 pi by default)
    thetacap_pi: Fraction = Fraction(40)
    kcap: int = 3
    precision: int = 128
    budget: int = 20000
    chord_tol: float = 1e-3  # fraction of the viewport diagonal
    max_dtheta: float = 0.05  # radians between consecutive samples

    @property
    def thetacap(self) -> float:
        return float(self.thetacap_pi) * math.pi


@dataclass(frozen=True)
class OracleConfig:
    """Fixed tolerances for the numeric cross-checks."""

    samples: int = 20000
    tau: float = 1e-4
    match_tol: float = 1e-6
    limit_tol: float = 1e-6
    newton_steps: int = 40
    extra: dict = field(default_factory=dict)
