"""Small-step walks in the quarter plane.

A model is the table of the eight step probabilities ``p[(i, j)]`` with
``i, j`` in ``{-1, 0, 1}`` and ``(i, j) != (0, 0)``.  Probabilities are kept as
:class:`fractions.Fraction` whenever the input was exact, so that the
validation of the catalog models is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from pathlib import Path

from .errors import (
    DegenerateSteps,
    NegativeProbability,
    NonZeroDrift,
    ParseError,
    SumNotOne,
    UnknownModel,
)

STEPS = tuple((i, j) for i in (-1, 0, 1) for j in (-1, 0, 1) if (i, j) != (0, 0))

# the eight neighbours of the origin, listed once around the circle
CYCLIC_ORDER = ((1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1), (0, 1))

SUM_TOL = 1e-12
DRIFT_TOL = 1e-12


def _coerce(value) -> Fraction | float:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_probability(value)
    if isinstance(value, Real):
        return float(value)
    raise TypeError(f"unsupported probability type {type(value).__name__}")


def parse_probability(text: str) -> Fraction | float:
    """Parse ``a/b`` or a decimal literal.

    Decimal literals are read exactly (``"0.3"`` becomes ``3/10``); only
    exponent or special float syntax falls back to float.
    """
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        pass
    try:
        return float(text)
    except ValueError:
        raise ValueError(f"not a probability: {text!r}") from None


@dataclass(frozen=True)
class Moments:
    drift_x: float
    drift_y: float
    m_xy: float
    m_xx: float
    m_yy: float


@dataclass(frozen=True)
class WalkModel:
    """Step probabilities of a walk with small steps.

    Parameters
    ----------
    p : dict
        Map ``(i, j) -> probability``; missing steps are zero.  Values may be
        ``Fraction``, ``int``, ``float`` or strings such as ``"1/4"``.
    name : str, optional
        Free label.
    """

    p: dict = field(default_factory=dict)
    name: str | None = None

    def __post_init__(self):
        table = {}
        for step, value in dict(self.p).items():
            step = (int(step[0]), int(step[1]))
            if step == (0, 0):
                if _coerce(value) != 0:
                    raise DegenerateSteps("p[0,0] must be zero")
                continue
            if step not in STEPS:
                raise ValueError(f"step {step} is not a small step")
            table[step] = _coerce(value)
        for step in STEPS:
            table.setdefault(step, Fraction(0))
        object.__setattr__(self, "p", table)

    def __getitem__(self, step) -> Fraction | float:
        return self.p[step]

    def __eq__(self, other):
        if not isinstance(other, WalkModel):
            return NotImplemented
        return all(self.p[s] == other.p[s] for s in STEPS)

    def __hash__(self):
        return hash(tuple(self.p[s] for s in STEPS))

    @property
    def exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.p.values())

    def prob(self, i: int, j: int) -> float:
        """Probability of step ``(i, j)`` as a float (zero for ``(0, 0)``)."""
        if (i, j) == (0, 0):
            return 0.0
        return float(self.p[(i, j)])

    def items(self):
        """Nonzero ``((i, j), probability)`` pairs as floats."""
        return [(s, float(v)) for s, v in self.p.items() if v != 0]

    def is_symmetric(self) -> bool:
        return all(self.p[(i, j)] == self.p[(j, i)] for i, j in STEPS)

    def as_float(self) -> "WalkModel":
        return WalkModel({s: float(v) for s, v in self.p.items()}, self.name)


def moments(model: WalkModel) -> Moments:
    """First and second moments of one step (exact for rational models)."""
    p = model.p
    dx = sum(i * v for (i, j), v in p.items())
    dy = sum(j * v for (i, j), v in p.items())
    mxy = sum(i * j * v for (i, j), v in p.items())
    mxx = sum(i * i * v for (i, j), v in p.items())
    myy = sum(j * j * v for (i, j), v in p.items())
    return Moments(float(dx), float(dy), float(mxy), float(mxx), float(myy))


def validate(model: WalkModel, require_zero_drift: bool = True) -> Moments:
    """Check the model and return its moments.

    Raises
    ------
    NegativeProbability, SumNotOne, DegenerateSteps, NonZeroDrift
    """
    p = model.p
    for step, v in p.items():
        if v < 0:
            raise NegativeProbability(f"p[{step[0]},{step[1]}] = {v} < 0")
    total = sum(p.values())
    if model.exact:
        if total != 1:
            raise SumNotOne(f"probabilities sum to {total}")
    elif abs(float(total) - 1.0) > SUM_TOL:
        raise SumNotOne(f"probabilities sum to {float(total)!r}")

    zeros = [p[s] == 0 for s in CYCLIC_ORDER]
    for k in range(8):
        if zeros[k] and zeros[(k + 1) % 8] and zeros[(k + 2) % 8]:
            a, b = CYCLIC_ORDER[k], CYCLIC_ORDER[(k + 2) % 8]
            raise DegenerateSteps(f"three consecutive zero steps from {a} to {b}")

    mom = moments(model)
    if require_zero_drift:
        if model.exact:
            dx = sum(i * v for (i, j), v in p.items())
            dy = sum(j * v for (i, j), v in p.items())
            bad = dx != 0 or dy != 0
        else:
            bad = abs(mom.drift_x) > DRIFT_TOL or abs(mom.drift_y) > DRIFT_TOL
        if bad:
            raise NonZeroDrift(f"drift = ({mom.drift_x!r}, {mom.drift_y!r})")
    return mom


def transpose(model: WalkModel) -> WalkModel:
    """Exchange the roles of the two coordinates."""
    name = None if model.name is None else model.name + "^T"
    if model.name and model.name.endswith("^T"):
        name = model.name[:-2]
    return WalkModel({(j, i): v for (i, j), v in model.p.items()}, name)


def reverse(model: WalkModel) -> WalkModel:
    """Walk with every step negated."""
    return WalkModel({(-i, -j): v for (i, j), v in model.p.items()}, model.name)


_Q = Fraction(1, 4)
_T = Fraction(1, 3)
CATALOG = {
    "srw": {(1, 0): _Q, (-1, 0): _Q, (0, 1): _Q, (0, -1): _Q},
    "diagonal": {(1, 1): _Q, (1, -1): _Q, (-1, 1): _Q, (-1, -1): _Q},
    "tandem": {(1, 0): _T, (-1, 1): _T, (0, -1): _T},
    "gessel": {(1, 1): _Q, (1, 0): _Q, (-1, -1): _Q, (-1, 0): _Q},
}


def catalog(name: str) -> WalkModel:
    """Reference models: ``srw``, ``diagonal``, ``tandem``, ``gessel``."""
    key = name.strip().lower()
    if key not in CATALOG:
        raise UnknownModel(f"unknown model {name!r}; choose from {sorted(CATALOG)}")
    return WalkModel(dict(CATALOG[key]), key)


def parse_config(text: str) -> WalkModel:
    """Parse the line-oriented model format.

    Each non-blank line is ``step <i> <j> <prob>`` or ``name <label>``.
    ``#`` starts a comment.  Unlisted steps are zero.
    """
    steps = {}
    name = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        key = parts[0].lower()
        if key == "name":
            if len(parts) < 2:
                raise ParseError("name needs a label", lineno)
            name = " ".join(parts[1:])
        elif key == "step":
            if len(parts) != 4:
                raise ParseError("expected 'step <i> <j> <prob>'", lineno)
            try:
                i, j = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError(f"bad step indices {parts[1]!r} {parts[2]!r}", lineno) from None
            if i not in (-1, 0, 1) or j not in (-1, 0, 1):
                raise ParseError(f"step ({i},{j}) is not a small step", lineno)
            if (i, j) in steps:
                raise ParseError(f"step ({i},{j}) given twice", lineno)
            try:
                steps[(i, j)] = parse_probability(parts[3])
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
        else:
            raise ParseError(f"unknown keyword {parts[0]!r}", lineno)
    if steps.get((0, 0), 0) != 0:
        raise DegenerateSteps("p[0,0] must be zero")
    steps.pop((0, 0), None)
    return WalkModel(steps, name)


def load_config(path: str | Path) -> WalkModel:
    return parse_config(Path(path).read_text())


def format_config(model: WalkModel) -> str:
    lines = [] if model.name is None else [f"name {model.name}"]
    for (i, j), v in model.p.items():
        if v != 0:
            lines.append(f"step {i} {j} {v}")
    return "\n".join(lines) + "\n"


def correlation(mom: Moments) -> float:
    return mom.m_xy / math.sqrt(mom.m_xx * mom.m_yy)
