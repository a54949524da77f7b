"""Exception hierarchy.

Every failure carries a symbolic name (the class name).  The CLI maps
:class:`ValidationError` to exit status 1 and :class:`NumericalError` to 2.
"""

from __future__ import annotations

from dataclasses import dataclass


class QuadrantError(Exception):
    """Base class for all package errors."""

    @property
    def symbol(self) -> str:
        return type(self).__name__


class ValidationError(QuadrantError):
    pass


class NumericalError(QuadrantError):
    pass


# -- walk model / input -------------------------------------------------------
class NegativeProbability(ValidationError):
    pass


class SumNotOne(ValidationError):
    pass


class DegenerateSteps(ValidationError):
    pass


class NonZeroDrift(ValidationError):
    pass


class UnknownModel(ValidationError):
    pass


class ParseError(ValidationError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


# -- kernel / classification --------------------------------------------------
class RootFindingFailure(NumericalError):
    pass


class BothBranchesInfinite(NumericalError):
    pass


class DivisionByZero(NumericalError, ZeroDivisionError):
    pass


class CorrelationOutOfRange(NumericalError):
    pass


# -- conformal map -------------------------------------------------------------
class NormalizationFailure(NumericalError):
    pass


class PoleAtOne(NumericalError):
    pass


class NonConvergentLimit(NumericalError):
    pass


# -- harmonic solution ----------------------------------------------------------
class ConstancyViolation(NumericalError):
    pass


class DegenerateMu(NumericalError):
    pass


class KernelZero(NumericalError):
    pass


class TorusThroughZero(NumericalError):
    pass


class ImaginaryResidue(NumericalError):
    pass


# -- oracles --------------------------------------------------------------------
class BoxOverflow(NumericalError):
    pass


class ZeroDrift(ValidationError):
    """A construction that needs a nonzero drift received a driftless walk."""


# -- reported, not raised ---------------------------------------------------------
class FormulaInconsistencyWarning(UserWarning):
    pass


@dataclass(frozen=True)
class FormulaInconsistency:
    """A closed form that fails its own consistency check, with the repair used."""

    symbol: str
    printed: float
    corrected: float
    defect: float
    message: str


class VerificationFailed(NumericalError):
    """A consistency check ran but exceeded its tolerance."""
