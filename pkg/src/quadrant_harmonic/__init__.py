"""Harmonic functions of zero-drift small-step walks killed at the boundary of the quarter plane."""

from .classify import AngleReport, angle, classify
from .conformal import ConformalMap, build_w, build_w_tilde, eval_w, growth_constant
from .harmonic import CoeffGrid, HarmonicSolution, eval_H, extract_coefficients, solve
from .kernel import KernelData, branch_X, branch_Y, build_kernel
from .walk_model import Moments, WalkModel, catalog, transpose, validate

__all__ = [
    "AngleReport", "CoeffGrid", "ConformalMap", "HarmonicSolution", "KernelData", "Moments",
    "WalkModel", "angle", "branch_X", "branch_Y", "build_kernel", "build_w", "build_w_tilde",
    "catalog", "classify", "eval_H", "eval_w", "extract_coefficients", "growth_constant",
    "solve", "transpose", "validate",
]
