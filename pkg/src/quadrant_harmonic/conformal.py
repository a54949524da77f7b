"""The gluing function ``w``: a conformal map of the domain bounded by ``X([y1, 1])``.

With ``u(x) = 1/3 - 2 f(x) / d''(1)`` (``d`` the discriminant, ``f`` a Mobius
function built from the far branch point ``x4``) and ``T = u**-0.5``::

    w_raw(x) = sin(k (arcsin T - pi/2))**2,   k = pi / theta

and, for ``|T| >= 1``, the equivalent form
``-1/4 [zeta**(2k) - 2 + zeta**(-2k)]`` with ``zeta = T + sqrt(T**2 - 1)``.

The map is then normalised as ``w = sign * scale * (w_raw - w_raw(0))`` with the
sign chosen so that ``w -> +inf`` as ``x -> 1-``.  ``u`` is a Mobius map with
``u(1) = 0``, ``u(x1) = 1`` and ``u(x4) = inf``.

When ``x1 == x4`` (both branch points at ``-1``; for instance the diagonal
walk) ``u`` collapses to zero and the formula is unusable.  The domain is then
the image of a half plane under a Mobius map and we use the direct map
``((x - x1) / (1 - x))**k - (-x1)**k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .classify import angle
from .errors import NonConvergentLimit, NormalizationFailure, PoleAtOne
from .kernel import KernelData, build_kernel
from .walk_model import WalkModel, transpose, validate

POLE_TOL = 1e-12
DEGENERATE_TOL = 1e-9
RICHARDSON_RTOL = 1e-4
EPS_LADDER = 2.0 ** -np.arange(4, 21)


@dataclass(frozen=True)
class ConformalMap:
    """Evaluable ``w`` with its normalisation constants.

    ``case`` is ``"finite"`` (``x4`` finite), ``"infinite"`` (``x4 = inf``)
    or ``"degenerate"`` (``x1 == x4``).
    """

    kd: KernelData
    theta: float
    case: str
    x1: float
    x4: float
    d1: float  # first derivative of the discriminant at x4 (finite case)
    d2: float  # second derivative at x4, or at 0 when x4 = inf
    d3: float  # third derivative at 0 (infinite case)
    d2_at_1: float
    raw_offset: float
    sign: float
    scale: float
    transposed: bool = False

    @property
    def k(self) -> float:
        return math.pi / self.theta

    def __call__(self, x):
        return eval_w(self, x)

    @property
    def u_prime_1(self) -> float:
        """Exact derivative of ``u`` at 1."""
        if self.case == "finite":
            return 2 * self.d1 / ((1 - self.x4) ** 2 * self.d2_at_1)
        if self.case == "infinite":
            return -self.d3 / (3 * self.d2_at_1)
        return math.nan

    @property
    def growth_constant_c(self) -> float:
        """Closed-form limit of ``(1 - x)**k w(x)`` as ``x -> 1``."""
        k = self.k
        if self.case == "degenerate":
            return self.scale * (1 - self.x1) ** k
        return self.scale * 4 ** (k - 1) / abs(self.u_prime_1) ** k

    def rescaled(self, factor: float) -> "ConformalMap":
        """Same map multiplied by ``factor > 0``."""
        return replace(self, scale=self.scale * factor)


def _f(cm: ConformalMap, x):
    if cm.case == "finite":
        return cm.d2 / 6 + cm.d1 / (x - cm.x4)
    return cm.d2 / 6 + cm.d3 * x / 6


def eval_u_literal(cm: ConformalMap, x):
    """``1/3 - 2 f(x) / d''(1)`` exactly as written."""
    x = np.asarray(x, dtype=complex)
    return 1 / 3 - 2 * _f(cm, x) / cm.d2_at_1


def eval_u(cm: ConformalMap, x):
    """``u`` in factored form ``u'(1) (1 - x4) (x - 1) / (x - x4)``.

    Same function as :func:`eval_u_literal` (``u`` vanishes at 1), but free of
    the cancellation that the literal form suffers near ``x = 1``.
    """
    x = np.asarray(x, dtype=complex)
    if cm.case == "finite":
        return cm.u_prime_1 * (1 - cm.x4) * (x - 1) / (x - cm.x4)
    return cm.u_prime_1 * (x - 1)


def eval_T(cm: ConformalMap, x):
    return np.sqrt(1 / eval_u(cm, x))


def raw_sine(T, k: float):
    """``sin(k (arcsin T - pi/2))**2`` with principal branches."""
    T = np.asarray(T, dtype=complex)
    return np.sin(k * (np.arcsin(T) - np.pi / 2)) ** 2


def raw_hyperbolic(T, k: float):
    """``-1/4 [zeta**(2k) - 2 + zeta**(-2k)]``, ``zeta = T + sqrt(T**2 - 1)``.

    The root of larger modulus is used for ``zeta`` and the other power is
    taken as a reciprocal, which avoids cancellation when ``|T|`` is large.
    """
    T = np.asarray(T, dtype=complex)
    s = np.sqrt(T * T - 1)
    zp, zm = T + s, T - s
    zeta = np.where(np.abs(zp) >= np.abs(zm), zp, zm)
    lz = np.log(zeta)
    return -0.25 * (np.exp(2 * k * lz) - 2 + np.exp(-2 * k * lz))


def _raw(cm: ConformalMap, x):
    x = np.asarray(x, dtype=complex)
    if cm.case == "degenerate":
        return ((x - cm.x1) / (1 - x)) ** cm.k
    T = eval_T(cm, x)
    small = np.abs(T) <= 1
    with np.errstate(all="ignore"):
        out = np.where(small, raw_sine(np.where(small, T, 0), cm.k),
                       raw_hyperbolic(np.where(small, 2, T), cm.k))
    return out


def eval_w(cm: ConformalMap, x):
    """Normalised ``w(x)``; raises :class:`PoleAtOne` at ``x = 1``."""
    x = np.asarray(x, dtype=complex)
    if np.any(np.abs(x - 1) < POLE_TOL):
        raise PoleAtOne("w has its pole at x = 1")
    out = cm.sign * cm.scale * (_raw(cm, x) - cm.raw_offset)
    return complex(out) if out.ndim == 0 else out


def build_w(kd: KernelData, theta: float, scale: float = 1.0, transposed: bool = False) -> ConformalMap:
    """Construct the normalised map for a zero-drift kernel."""
    x1, x4 = kd.x1, kd.x4
    d2_at_1 = float(kd.d(1.0, 2))
    if not np.isfinite(x4):
        case = "infinite"
        d1, d2, d3 = math.nan, float(kd.d(0.0, 2)), float(kd.d(0.0, 3))
    elif abs(x1 - x4) < DEGENERATE_TOL:
        case = "degenerate"
        d1 = d2 = d3 = math.nan
    else:
        case = "finite"
        d1, d2, d3 = float(kd.d(x4, 1)), float(kd.d(x4, 2)), math.nan
    cm = ConformalMap(kd, theta, case, x1, x4, d1, d2, d3, d2_at_1,
                      raw_offset=0.0, sign=1.0, scale=1.0, transposed=transposed)
    if case == "degenerate":
        offset = (-x1) ** cm.k
    else:
        offset = complex(_raw(cm, 0.0))
        if not np.isfinite(offset) or abs(offset.imag) > 1e-10 * max(1.0, abs(offset)):
            raise NormalizationFailure(f"w_raw(0) = {offset!r} is not a finite real number")
        offset = offset.real
    # sign: w must tend to +inf along (0, 1)
    probe = float(np.real(_raw(cm, 1 - 1e-6) - offset))
    if not np.isfinite(probe) or probe == 0:
        raise NormalizationFailure("cannot fix the sign of w near 1")
    return replace(cm, raw_offset=offset, sign=math.copysign(1.0, probe), scale=scale)


def build_w_model(model: WalkModel, scale: float = 1.0) -> ConformalMap:
    validate(model, require_zero_drift=True)
    kd = build_kernel(model)
    return build_w(kd, angle(validate(model)), scale)


def growth_constant(cm: ConformalMap, eps=EPS_LADDER) -> tuple[float, float]:
    """Estimate ``c = lim eps**k w(1 - eps)`` by one Richardson step.

    Returns ``(c, error_estimate)``.  Raises :class:`NonConvergentLimit` when
    the last two extrapolated values differ by more than 1e-4 relative.
    """
    eps = np.asarray(eps, dtype=float)
    g = eps ** cm.k * np.real(eval_w(cm, 1 - eps))
    rich = 2 * g[1:] - g[:-1]
    c, prev = rich[-1], rich[-2]
    err = abs(c - prev)
    if not np.isfinite(c) or err > RICHARDSON_RTOL * abs(c):
        raise NonConvergentLimit(f"growth constant estimates {prev!r}, {c!r}")
    return float(c), float(err)


def growth_exponent(cm: ConformalMap, eps: float = 2.0**-20) -> float:
    """Log-log slope of ``w(1 - e)`` against ``1/e`` between ``2e`` and ``e``."""
    w1 = np.real(eval_w(cm, 1 - 2 * eps))
    w2 = np.real(eval_w(cm, 1 - eps))
    return float(np.log(w2 / w1) / np.log(2.0))


def transposed_calibration(model: WalkModel, cm: ConformalMap, cm_t: ConformalMap) -> float:
    """Factor putting ``w_t`` (map of the transposed walk) on the scale of ``w``.

    Near ``y = 1`` we have ``1 - X0(y) ~ sqrt(m_yy / m_xx) e^{i theta} (1 - y)``,
    so the leading singular parts of ``w(X0(y))`` and ``w_t(y)`` cancel when
    ``c_t * factor = c * (m_xx / m_yy)**(k/2)``.
    """
    mom = validate(model)
    k = cm.k
    return cm.growth_constant_c * (mom.m_xx / mom.m_yy) ** (k / 2) / cm_t.growth_constant_c


def build_w_tilde(model: WalkModel, cm: ConformalMap | None = None) -> ConformalMap:
    """Map for the transposed walk, rescaled to pair with ``w``."""
    if cm is None:
        cm = build_w_model(model)
    mt = transpose(model)
    cm_t = build_w(build_kernel(mt), angle(validate(mt)), transposed=True)
    return cm_t.rescaled(transposed_calibration(model, cm, cm_t))


def taylor_coefficients(fn, n: int, radius: float = 0.25, m: int = 64) -> np.ndarray:
    """First ``n`` Taylor coefficients at 0 by the trapezoid rule on a circle."""
    z = radius * np.exp(2j * np.pi * np.arange(m) / m)
    a = np.fft.fft(fn(z)) / m
    return a[:n] / radius ** np.arange(n)


def x_from_u(cm: ConformalMap, u):
    """Inverse of ``u`` (finite and infinite cases)."""
    u = np.asarray(u, dtype=complex)
    g = (1 / 3 - u) * cm.d2_at_1 / 2  # = f(x)
    if cm.case == "finite":
        return cm.x4 + cm.d1 / (g - cm.d2 / 6)
    if cm.case == "infinite":
        return (g - cm.d2 / 6) * 6 / cm.d3
    raise ValueError("u is not defined in the degenerate case")
