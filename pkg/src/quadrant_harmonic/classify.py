"""Angle of the walk, finiteness of its group and nature of the generating function."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CorrelationOutOfRange
from .walk_model import Moments

RATIONAL_TOL = 1e-9
CORR_GUARD = 1e-12


@dataclass(frozen=True)
class AngleReport:
    theta: float
    pi_over_theta: float
    rationality: str  # "Integer", "Rational" or "PresumedIrrational"
    p: int | None  # pi/theta = p/q when rational
    q: int | None
    denominator_cap: int
    group_order: int | None  # None means infinite
    nature: str  # "Rational", "AlgebraicNonRational" or "NonAlgebraic"

    @property
    def finite_group(self) -> bool:
        return self.group_order is not None

    def as_dict(self) -> dict:
        if self.rationality == "Integer":
            rat = f"Integer({self.p})"
        elif self.rationality == "Rational":
            rat = f"Rational({self.p},{self.q})"
        else:
            rat = f"PresumedIrrational({self.denominator_cap})"
        return {
            "theta": self.theta,
            "theta_over_pi": self.theta / math.pi,
            "pi_over_theta": self.pi_over_theta,
            "rationality": rat,
            "group_order": "infinite" if self.group_order is None else self.group_order,
            "nature": {"Rational": "rational",
                       "AlgebraicNonRational": "algebraic-non-rational",
                       "NonAlgebraic": "non-algebraic"}[self.nature],
        }


def angle(mom: Moments) -> float:
    """``arccos(-m_xy / sqrt(m_xx m_yy))`` in ``(0, pi)``."""
    if mom.m_xx <= 0 or mom.m_yy <= 0:
        raise CorrelationOutOfRange("second moments must be positive")
    rho = -mom.m_xy / math.sqrt(mom.m_xx * mom.m_yy)
    if abs(rho) > 1 + CORR_GUARD:
        raise CorrelationOutOfRange(f"correlation {rho!r} outside [-1, 1]")
    if abs(rho) >= 1:
        raise CorrelationOutOfRange("angle degenerates to 0 or pi")
    return math.acos(rho)


def classify(theta: float, denominator_cap: int = 100) -> AngleReport:
    """Decide numerically whether ``theta/pi`` is rational.

    The best rational approximation with denominator at most
    ``denominator_cap`` is accepted when it lies within 1e-9 of ``theta/pi``.
    """
    t = theta / math.pi
    frac = Fraction(t).limit_denominator(denominator_cap)
    if frac != 0 and abs(t - float(frac)) <= RATIONAL_TOL:
        a, b = frac.numerator, frac.denominator  # theta/pi = a/b
        inv = Fraction(b, a)  # pi/theta
        # smallest p >= 1 with p*a/b integral is b
        order = 2 * b
        if inv.denominator == 1:
            rationality, nature = "Integer", "Rational"
        else:
            rationality, nature = "Rational", "AlgebraicNonRational"
        return AngleReport(theta, math.pi / theta, rationality, inv.numerator, inv.denominator,
                           denominator_cap, order, nature)
    return AngleReport(theta, math.pi / theta, "PresumedIrrational", None, None,
                       denominator_cap, None, "NonAlgebraic")


def homogeneity_diagnostic(f: np.ndarray, n_diag: int | None = None) -> dict:
    """How far the grid is from a homogeneous polynomial of degree pi/theta.

    Only a diagnostic.  For each antidiagonal ``i + j = s`` the values are
    compared with ``s**k * g(i/s)``: we fit ``log f`` against ``log s`` along
    the rays ``i/j = 1`` and ``i/j = 2`` and report the two slopes.
    """
    n = f.shape[0] if n_diag is None else n_diag
    out = {}
    for ratio in (1, 2):
        idx = [(ratio * t, t) for t in range(1, n + 1) if ratio * t <= f.shape[0]]
        if len(idx) < 4:
            continue
        s = np.array([i + j for i, j in idx], dtype=float)
        v = np.array([f[i - 1, j - 1] for i, j in idx])
        half = len(idx) // 2
        slope = np.polyfit(np.log(s[half:]), np.log(v[half:]), 1)[0]
        out[f"degree_along_{ratio}_1"] = float(slope)
    return out
