"""Generating function of the harmonic function and its Taylor coefficients.

The sections satisfy ``L(x,0) H(x,0) = mu (w(x) + nu)`` and
``L(0,y) H(0,y) = mu_t (w_t(y) + nu_t)``; the full function follows from the
functional equation
``L(x,y) H(x,y) = L(x,0) H(x,0) + L(0,y) H(0,y) - L(0,0) H(0,0)`` with
``H(0,0) = f(1,1) = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .classify import angle
from .conformal import ConformalMap, build_w, build_w_tilde, taylor_coefficients
from .errors import (
    ConstancyViolation,
    DegenerateMu,
    ImaginaryResidue,
    KernelZero,
    TorusThroughZero,
)
from .kernel import KernelData, branches_X, branches_Y, build_kernel
from .walk_model import Moments, WalkModel, validate

CONSTANCY_RTOL = 1e-6
KERNEL_ZERO_TOL = 1e-10
TORUS_MIN_L = 1e-6
IMAG_TOL = 1e-8
SAMPLE_FRACTIONS = (0.25, 0.5, 0.75)
DEFAULT_RADIUS = 0.9
RADIUS_FALLBACK = (0.85, 0.8, 0.95, 0.75, 0.7)


@dataclass(frozen=True)
class HarmonicSolution:
    model: WalkModel
    moments: Moments
    kd: KernelData
    w: ConformalMap
    w_t: ConformalMap
    mu: float
    nu: float
    mu_t: float
    nu_t: float
    p11: float

    @property
    def theta(self) -> float:
        return self.w.theta

    def __call__(self, x, y):
        return eval_H(self, x, y)


@dataclass(frozen=True)
class CoeffGrid:
    """``values[i-1, j-1] = f(i, j)`` for ``1 <= i, j <= n`` with ``f(1,1) = 1``."""

    values: np.ndarray
    radius: float
    m: int
    imag_residue: float

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def __call__(self, i: int, j: int) -> float:
        if i == 0 or j == 0:
            return 0.0
        return float(self.values[i - 1, j - 1])

    def padded(self) -> np.ndarray:
        """``(n+1) x (n+1)`` array indexed by ``(i, j)`` with zero axes."""
        out = np.zeros((self.n + 1, self.n + 1))
        out[1:, 1:] = self.values
        return out


def _sample_points(lo: float) -> np.ndarray:
    return lo + (1.0 - lo) * np.asarray(SAMPLE_FRACTIONS)


def _constant(values: np.ndarray, what: str) -> float:
    v = np.real(values)
    mean = float(np.mean(v))
    spread = float(np.max(np.abs(v - mean)))
    if not np.isfinite(mean) or spread > CONSTANCY_RTOL * max(abs(mean), 1e-300):
        raise ConstancyViolation(f"{what} is not constant: {v.tolist()}")
    if abs(mean) < 1e-14:
        raise DegenerateMu(f"{what} vanishes")
    return mean


def _mu_at_origin(cm: ConformalMap, p_lin: float, p_quad: float, what: str) -> float:
    """``mu`` from the lowest Taylor coefficient of ``mu w`` matching ``L(x,0)``."""
    a = taylor_coefficients(cm, 3).real
    if p_lin != 0:
        if abs(a[1]) < 1e-12:
            raise DegenerateMu(f"{what}: w'(0) vanishes")
        return p_lin / a[1]
    if p_quad == 0 or abs(a[2]) < 1e-12:
        raise DegenerateMu(f"{what}: no nonvanishing low-order coefficient")
    return p_quad / a[2]


def solve(model: WalkModel, scale: float = 1.0) -> HarmonicSolution:
    """Constants of the section formulas, normalised by ``f(1,1) = 1``.

    ``scale`` multiplies the conformal map; the resulting ``H`` does not depend
    on it.
    """
    mom = validate(model, require_zero_drift=True)
    kd = build_kernel(model)
    theta = angle(mom)
    w = build_w(kd, theta, scale)
    w_t = build_w_tilde(model, w)
    p11 = model.prob(1, 1)
    if p11 == 0:
        mu = _mu_at_origin(w, model.prob(0, 1), model.prob(-1, 1), "mu")
        mu_t = _mu_at_origin(w_t, model.prob(1, 0), model.prob(1, -1), "mu_t")
        nu = nu_t = 0.0
    else:
        ys = _sample_points(kd.y1)
        d = _constant(w(branches_X(kd, ys)[0]) + w_t(ys), "w(X0(y)) + w_t(y)")
        xs = _sample_points(kd.x1)
        d_t = _constant(w_t(branches_Y(kd, xs)[0]) + w(xs), "w_t(Y0(x)) + w(x)")
        mu, mu_t = -p11 / d, -p11 / d_t
        nu, nu_t = p11 / mu, p11 / mu_t
    return HarmonicSolution(model, mom, kd, w, w_t, float(mu), float(nu), float(mu_t), float(nu_t), p11)


def section_x(sol: HarmonicSolution, x):
    """``L(x,0) H(x,0) = mu (w(x) + nu)``."""
    return sol.mu * (sol.w(x) + sol.nu)


def section_y(sol: HarmonicSolution, y):
    """``L(0,y) H(0,y) = mu_t (w_t(y) + nu_t)``."""
    return sol.mu_t * (sol.w_t(y) + sol.nu_t)


def _divide(num, den, at_origin):
    num = np.asarray(num, dtype=complex)
    den = np.asarray(den, dtype=complex)
    bad = (np.abs(den) < KERNEL_ZERO_TOL) & ~at_origin
    if np.any(bad):
        raise KernelZero(f"|L| < {KERNEL_ZERO_TOL:g} at the evaluation point")
    with np.errstate(all="ignore"):
        out = np.where(at_origin, 1.0, num / np.where(at_origin, 1.0, den))
    return complex(out) if out.ndim == 0 else out


def eval_Hx0(sol: HarmonicSolution, x):
    x = np.asarray(x, dtype=complex)
    return _divide(section_x(sol, x), sol.kd.L(x, 0), x == 0)


def eval_H0y(sol: HarmonicSolution, y):
    y = np.asarray(y, dtype=complex)
    return _divide(section_y(sol, y), sol.kd.L(0, y), y == 0)


def eval_H(sol: HarmonicSolution, x, y):
    """``H(x, y)`` for ``|x|, |y| < 1``; raises :class:`KernelZero` on ``L = 0``."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=complex), np.asarray(y, dtype=complex))
    num = section_x(sol, x) + section_y(sol, y) - sol.p11
    return _divide(num, sol.kd.L(x, y), (x == 0) & (y == 0))


def _grid_size(n: int, m: int | None) -> int:
    if m is not None:
        return m
    return max(512, 1 << math.ceil(math.log2(4 * n)))


def extract_coefficients(sol: HarmonicSolution, n: int, radius: float = DEFAULT_RADIUS,
                         m: int | None = None) -> CoeffGrid:
    """Taylor coefficients ``f(i, j)``, ``1 <= i, j <= n``, by a 2-D FFT on a torus.

    The torus ``|x| = |y| = radius`` is moved to a fallback radius if it passes
    within 1e-6 of a zero of ``L``; an imaginary residue above 1e-8 (relative)
    triggers one retry with a doubled grid.
    """
    if n < 1:
        raise ValueError("n must be positive")
    m = _grid_size(n, m)
    radii = [radius] + [r for r in RADIUS_FALLBACK if r != radius]
    for r in radii:
        z = r * np.exp(2j * np.pi * np.arange(m) / m)
        lmin = np.min(np.abs(sol.kd.L(z[:, None], z[None, :])))
        if lmin >= TORUS_MIN_L:
            break
    else:
        raise TorusThroughZero(f"every candidate torus meets a zero of L (min |L| = {lmin:.3g})")

    for mm in (m, 2 * m):
        z = r * np.exp(2j * np.pi * np.arange(mm) / mm)
        hv = eval_H(sol, z[:, None], z[None, :])
        a = np.fft.fft2(hv) / mm**2
        pw = r ** -np.arange(n, dtype=float)
        f = a[:n, :n] * pw[:, None] * pw[None, :]
        f = f / f[0, 0]
        resid = float(np.max(np.abs(f.imag)) / np.max(np.abs(f.real)))
        if resid <= IMAG_TOL:
            return CoeffGrid(f.real.copy(), r, mm, resid)
    raise ImaginaryResidue(f"coefficients have relative imaginary part {resid:.3g}")


def btm_residual(sol: HarmonicSolution, ys) -> np.ndarray:
    """``mu (w(X0(y)) + nu) + mu_t (w_t(y) + nu_t) - L(0,0)`` at the given ``y``."""
    ys = np.asarray(ys, dtype=float)
    x0 = branches_X(sol.kd, ys)[0]
    return section_x(sol, x0) + section_y(sol, ys) - sol.p11
