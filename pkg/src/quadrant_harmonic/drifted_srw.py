"""Closed-form harmonic functions of the simple random walk with drift.

For a walk with axial steps only, the minimal harmonic functions form a
family ``f_gamma``, ``gamma`` in ``[0, pi/2]``::

    f_gamma(i, j) = (s_+^i - s_-^i)(st_+^j - st_-^j)        0 < gamma < pi/2
    f_0(i, j)     = (s_+^i - s_-^i) j st_+^j
    f_pi/2(i, j)  = i s_+^i (st_+^j - st_-^j)

with ``s_pm = r pm sqrt(r^2 - p[-1,0]/p[1,0])`` and similarly for ``st`` with
``rt`` and ``p[0,-1]/p[0,1]``.  ``r`` and ``rt`` are algebraic in
``t = tan(gamma)^2``.

Both are evaluated in rationalised form, which removes the ``0/0`` at
``gamma = pi/4`` and gives the endpoint limits directly.

A product ``s^i st^j`` is harmonic exactly when
``p[1,0] s + p[-1,0]/s + p[0,1] st + p[0,-1]/st = 1``.  For both roots this
reads ``2 p[1,0] r + 2 p[0,1] rt = 1``.  The stated ``rt`` has ``p[1,0]``
in its denominator and fails this test unless ``p[1,0] = p[0,1]``.  The
family therefore reports the discrepancy and uses the ``rt`` fixed by the
condition.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    FormulaInconsistency,
    FormulaInconsistencyWarning,
    NegativeProbability,
    RootFindingFailure,
    SumNotOne,
    ZeroDrift,
)
from .walk_model import WalkModel

KERNEL_TOL = 1e-12


@dataclass(frozen=True)
class DriftedSRW:
    p10: float
    pm10: float
    p01: float
    p0m1: float

    def __post_init__(self):
        probs = (self.p10, self.pm10, self.p01, self.p0m1)
        if min(probs) <= 0:
            raise NegativeProbability("all four axial probabilities must be positive")
        if abs(sum(probs) - 1) > 1e-12:
            raise SumNotOne(f"probabilities sum to {sum(probs)!r}")
        if self.drift == (0.0, 0.0):
            raise ZeroDrift("the closed forms need a nonzero drift")

    @property
    def drift(self) -> tuple:
        return (self.p10 - self.pm10, self.p01 - self.p0m1)

    def walk(self) -> WalkModel:
        return WalkModel({(1, 0): self.p10, (-1, 0): self.pm10, (0, 1): self.p01, (0, -1): self.p0m1},
                         "drifted-srw")

    @classmethod
    def symmetric(cls, eps: float) -> "DriftedSRW":
        """``p[1,0] = p[0,1] = 1/4 + eps/2`` and ``p[-1,0] = p[0,-1] = 1/4 - eps/2``."""
        return cls(0.25 + eps / 2, 0.25 - eps / 2, 0.25 + eps / 2, 0.25 - eps / 2)


@dataclass(frozen=True)
class GammaFamily:
    model: DriftedSRW
    gamma: float
    r: float
    r_t: float
    s_plus: float
    s_minus: float
    st_plus: float
    st_minus: float
    r_t_printed: float
    inconsistency: FormulaInconsistency | None = None

    @property
    def endpoint(self) -> str:
        if self.gamma == 0:
            return "zero"
        if self.gamma == math.pi / 2:
            return "right"
        return "interior"


def _r(m: DriftedSRW, t: float) -> float:
    """``r`` at ``t = tan(gamma)^2`` (``inf`` allowed)."""
    if math.isinf(t):
        return math.sqrt(m.pm10 / m.p10)
    K = 1 - 4 * m.p0m1 * m.p01 + 4 * m.pm10 * m.p10 * t
    return K / (2 * m.p10 * (1 + math.sqrt(1 - (1 - t) * K)))


def _r_t(m: DriftedSRW, t: float, den: float) -> float:
    """``rt`` at ``t = tan(gamma)^2`` with the given denominator probability.

    Rationalised from ``[1 - sqrt(1 - (1 - 1/t) K)] / (2 den (1 - 1/t))`` with
    ``K = 1 - 4 p[-1,0] p[1,0] + 4 p[0,-1] p[0,1] / t``.
    """
    k0 = 1 - 4 * m.pm10 * m.p10
    q = m.p0m1 * m.p01
    if math.isinf(t):
        return k0 / (2 * den * (1 + math.sqrt(1 - k0)))
    N = t * t - (t - 1) * (t * k0 + 4 * q)
    return (t * k0 + 4 * q) / (2 * den * (t + math.sqrt(N)))


def _roots(r: float, prod: float, double: bool = False) -> tuple[float, float]:
    """Roots ``r +- sqrt(r^2 - prod)``; ``double`` forces the analytic double root."""
    if double:
        return r, r
    disc = r * r - prod
    if disc < 0:
        if disc < -1e-12 * max(prod, 1.0):
            raise RootFindingFailure(f"complex roots: r^2 - {prod} = {disc:.3e}")
        disc = 0.0
    d = math.sqrt(disc)
    hi = r + d
    return hi, prod / hi  # product form for the small root


def _tan2(gamma: float) -> float:
    if gamma == math.pi / 2:
        return math.inf
    return math.tan(gamma) ** 2


def kernel_condition(m: DriftedSRW, s: float, st: float) -> float:
    """``p[1,0] s + p[-1,0]/s + p[0,1] st + p[0,-1]/st``; equals 1 on harmonic products."""
    return m.p10 * s + m.pm10 / s + m.p01 * st + m.p0m1 / st


def gamma_family(m: DriftedSRW, gamma: float, variant: str = "adjudicated", warn: bool = True) -> GammaFamily:
    """Constants of ``f_gamma``.

    ``variant="printed"`` keeps the stated ``rt``; ``"adjudicated"`` (the
    default) keeps it only if it passes the harmonicity condition, otherwise it
    records a :class:`FormulaInconsistency`, warns, and uses
    ``rt = (1 - 2 p[1,0] r) / (2 p[0,1])``.
    """
    if not 0 <= gamma <= math.pi / 2:
        raise ValueError("gamma must lie in [0, pi/2]")
    if variant not in ("adjudicated", "printed"):
        raise ValueError("variant must be 'adjudicated' or 'printed'")
    t = _tan2(gamma)
    r = _r(m, t)
    r_t_printed = _r_t(m, t, m.p10)
    s_plus, s_minus = _roots(r, m.pm10 / m.p10, double=math.isinf(t))
    issue = None
    r_t = r_t_printed
    defect = 2 * m.p10 * r + 2 * m.p01 * r_t_printed - 1
    if abs(defect) > KERNEL_TOL:
        corrected = (1 - 2 * m.p10 * r) / (2 * m.p01)
        issue = FormulaInconsistency(
            "r_tilde", r_t_printed, corrected, defect,
            f"printed r_tilde violates the harmonicity condition by {defect:.3e} at gamma={gamma:.6g}",
        )
        if warn:
            warnings.warn(issue.message, FormulaInconsistencyWarning, stacklevel=2)
        if variant == "adjudicated":
            r_t = corrected
    st_plus, st_minus = _roots(r_t, m.p0m1 / m.p01, double=(t == 0))
    return GammaFamily(m, gamma, r, r_t, s_plus, s_minus, st_plus, st_minus, r_t_printed, issue)


def _divided_power(hi: float, lo: float, k):
    """``(hi**k - lo**k) / (hi - lo)`` without cancellation; ``k hi**(k-1)`` if equal."""
    k = np.asarray(k, dtype=float)
    lr = math.log(lo / hi)
    q = k if lr == 0 else np.expm1(k * lr) / math.expm1(lr)
    return hi ** (k - 1) * q


def _root_gap(hi: float, lo: float) -> float:
    # hi - lo from the discriminant: both roots are r +- d with product hi * lo
    r = (hi + lo) / 2
    return 2 * math.sqrt(max(r * r - hi * lo, 0.0))


def _factors(fam: GammaFamily, i0, j0):
    """``(a, b, ga, gb)`` with ``s_+^i - s_-^i = ga * a`` and likewise in ``j``."""
    a = _divided_power(fam.s_plus, fam.s_minus, i0)
    b = _divided_power(fam.st_plus, fam.st_minus, j0)
    return a, b, _root_gap(fam.s_plus, fam.s_minus), _root_gap(fam.st_plus, fam.st_minus)


def f_gamma(fam: GammaFamily, i0, j0):
    """Unnormalised ``f_gamma(i0, j0)``; arrays broadcast."""
    i0 = np.asarray(i0, dtype=float)
    j0 = np.asarray(j0, dtype=float)
    a, b, ga, gb = _factors(fam, i0, j0)
    if fam.gamma == 0:
        out = ga * a * j0 * fam.st_plus**j0
    elif fam.gamma == math.pi / 2:
        out = i0 * fam.s_plus**i0 * gb * b
    else:
        out = ga * a * gb * b
    return float(out) if out.ndim == 0 else out


def f_gamma_grid(fam: GammaFamily, n: int, normalize: bool = True) -> np.ndarray:
    """``values[i-1, j-1] = f_gamma(i, j)`` for ``1 <= i, j <= n``.

    The normalised grid drops the root gaps, which cancel in ``f / f(1,1)``,
    so it stays accurate when ``gamma`` is close to an endpoint.
    """
    idx = np.arange(1, n + 1, dtype=float)
    if not normalize:
        return np.asarray(f_gamma(fam, idx[:, None], idx[None, :]), dtype=float)
    a, b, _, _ = _factors(fam, idx, idx)
    if fam.gamma == 0:
        b = idx * fam.st_plus**idx
    elif fam.gamma == math.pi / 2:
        a = idx * fam.s_plus**idx
    g = np.outer(a, b)
    return g / g[0, 0]


def convergence_check(eps_seq, gamma: float = math.pi / 4, box: int = 10) -> np.ndarray:
    """``max |f_gamma(i, j) - i j|`` over the box for each drift in ``eps_seq``.

    Uses the symmetric drift family of :meth:`DriftedSRW.symmetric`; both sides
    are normalised by ``f(1,1) = 1``.
    """
    idx = np.arange(1, box + 1)
    target = np.outer(idx, idx).astype(float)
    errs = []
    for eps in eps_seq:
        fam = gamma_family(DriftedSRW.symmetric(eps), gamma, warn=False)
        errs.append(float(np.max(np.abs(f_gamma_grid(fam, box) - target))))
    return np.array(errs)
