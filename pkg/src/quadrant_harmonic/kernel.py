"""Kernel of the walk and the algebraic functions attached to it.

The kernel is ``L(x, y) = xy [sum_{i,j} p[i,j] x^-i y^-j - 1]``, written both as
``alpha(x) y^2 + beta(x) y + gamma(x)`` and ``alpha_t(y) x^2 + beta_t(y) x + gamma_t(y)``.
Coefficient arrays are stored lowest degree first (``numpy.polynomial``
convention).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import BothBranchesInfinite, DivisionByZero, RootFindingFailure
from .walk_model import WalkModel

POINT_AT_INFINITY = complex(math.inf, 0.0)
LEADING_TOL = 1e-14


def is_infinite(z) -> np.ndarray | bool:
    return ~np.isfinite(z) if isinstance(z, np.ndarray) else not np.isfinite(z)


@dataclass(frozen=True)
class KernelData:
    """Section polynomials, discriminants and branch points.

    ``x`` and ``y`` hold the branch points ``(x1, x2, x3, x4)``; ``x4`` may be
    ``inf``.  ``q`` and ``q_t`` are the quadratic cofactors of ``(x-1)^2`` in
    the discriminants.
    """

    model: WalkModel
    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    alpha_t: np.ndarray
    beta_t: np.ndarray
    gamma_t: np.ndarray
    delta: np.ndarray
    delta_t: np.ndarray
    q: np.ndarray
    q_t: np.ndarray
    x: tuple
    y: tuple

    @property
    def x1(self) -> float:
        return self.x[0]

    @property
    def x4(self) -> float:
        return self.x[3]

    @property
    def y1(self) -> float:
        return self.y[0]

    @property
    def y4(self) -> float:
        return self.y[3]

    def L(self, x, y):
        """Kernel in the ``y``-section form."""
        x = np.asarray(x, dtype=complex)
        y = np.asarray(y, dtype=complex)
        return P.polyval(x, self.alpha) * y**2 + P.polyval(x, self.beta) * y + P.polyval(x, self.gamma)

    def L_t(self, x, y):
        """Kernel in the ``x``-section form (same polynomial)."""
        x = np.asarray(x, dtype=complex)
        y = np.asarray(y, dtype=complex)
        return P.polyval(y, self.alpha_t) * x**2 + P.polyval(y, self.beta_t) * x + P.polyval(y, self.gamma_t)

    def d(self, x, order: int = 0):
        """``order``-th derivative of the discriminant in ``x``."""
        return P.polyval(x, P.polyder(self.delta, order) if order else self.delta)

    def d_t(self, y, order: int = 0):
        return P.polyval(y, P.polyder(self.delta_t, order) if order else self.delta_t)


def section_polynomials(p: dict, transposed: bool = False):
    """Return ``(alpha, beta, gamma)`` with entries of the type stored in ``p``."""
    g = (lambda i, j: p[(j, i)]) if transposed else (lambda i, j: p[(i, j)])
    alpha = [g(1, -1), g(0, -1), g(-1, -1)]
    beta = [g(1, 0), -1, g(-1, 0)]
    gamma = [g(1, 1), g(0, 1), g(-1, 1)]
    return alpha, beta, gamma


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        for j, v in enumerate(b):
            out[i + j] += u * v
    return out


def discriminant(alpha, beta, gamma):
    """``beta^2 - 4 alpha gamma`` as a coefficient list (exact if inputs are)."""
    bb = _poly_mul(beta, beta)
    ag = _poly_mul(alpha, gamma)
    return [u - 4 * v for u, v in zip(bb, ag)]


def deflate_double_one(delta):
    """Divide a quartic by ``(x-1)^2``; return ``(quadratic, remainder)``.

    Synthetic division twice by ``x - 1``; exact for ``Fraction`` input.
    """
    def divide(c):
        # c lowest first, divide by (x - 1)
        hi = list(reversed(c))
        out = [hi[0]]
        for a in hi[1:]:
            out.append(a + out[-1])
        rem = out.pop()
        return list(reversed(out)), rem

    q1, r1 = divide(delta)
    q2, r2 = divide(q1)
    return q2, (r1, r2)


def _quadratic_roots(q) -> tuple[float, float]:
    """Real roots ``(r_small, r_large)`` by modulus of ``q0 + q1 x + q2 x^2``."""
    q0, q1, q2 = (float(v) for v in q)
    scale = max(abs(q0), abs(q1), abs(q2))
    if abs(q2) <= LEADING_TOL * max(scale, 1.0):
        if abs(q1) <= LEADING_TOL * max(scale, 1.0):
            raise RootFindingFailure("discriminant has no root besides the double root at 1")
        return -q0 / q1, math.inf
    disc = q1 * q1 - 4 * q2 * q0
    if disc < 0:
        if disc < -1e-12 * max(q1 * q1, abs(4 * q2 * q0), 1e-300):
            raise RootFindingFailure(f"residual quadratic has complex roots (disc={disc!r})")
        disc = 0.0
    s = math.sqrt(disc)
    t = -0.5 * (q1 + math.copysign(s, q1) if q1 != 0 else s)
    if t == 0:
        return 0.0, 0.0
    ra, rb = t / q2, q0 / t
    return (ra, rb) if abs(ra) <= abs(rb) else (rb, ra)


def _branch_points(delta):
    q, rem = deflate_double_one(delta)
    if any(abs(float(r)) > 1e-10 for r in rem):
        raise RootFindingFailure(f"1 is not a double root of the discriminant (remainders {rem})")
    r1, r4 = _quadratic_roots(q)
    return np.array([float(v) for v in q]), (r1, 1.0, 1.0, r4)


def build_kernel(model: WalkModel) -> KernelData:
    """Coefficients, discriminants and branch points of a zero-drift model."""
    p = model.p
    a, b, c = section_polynomials(p)
    at, bt, ct = section_polynomials(p, transposed=True)
    delta = discriminant(a, b, c)
    delta_t = discriminant(at, bt, ct)
    q, xs = _branch_points(delta)
    qt, ys = _branch_points(delta_t)
    arr = lambda v: np.array([float(u) for u in v])  # noqa: E731
    return KernelData(
        model=model,
        alpha=arr(a), beta=arr(b), gamma=arr(c),
        alpha_t=arr(at), beta_t=arr(bt), gamma_t=arr(ct),
        delta=arr(delta), delta_t=arr(delta_t),
        q=q, q_t=qt, x=xs, y=ys,
    )


def _solve_sections(a, b, c, disc=None):
    """Both roots of ``a z^2 + b z + c`` (arrays), ordered ``|z0| <= |z1|``.

    ``disc`` may supply ``b^2 - 4ac`` computed in a better conditioned way.
    Where ``a == 0`` the second root is the point at infinity.  Ties in modulus
    put the root with negative imaginary part first.
    """
    a, b, c = np.broadcast_arrays(*(np.asarray(v, dtype=complex) for v in (a, b, c)))
    if disc is None:
        disc = b * b - 4 * a * c
    scale = np.maximum.reduce([np.abs(a), np.abs(b), np.abs(c), np.ones(a.shape)])
    lin = np.abs(a) <= LEADING_TOL * scale
    if np.any(lin & (np.abs(b) <= LEADING_TOL * scale)):
        raise BothBranchesInfinite("both leading section coefficients vanish")

    sq = np.sqrt(np.broadcast_to(disc, a.shape))
    # pick the sign that avoids cancellation
    flip = np.real(np.conj(b) * sq) < 0
    sq = np.where(flip, -sq, sq)
    t = -0.5 * (b + sq)
    with np.errstate(divide="ignore", invalid="ignore"):
        r_a = np.where(lin, -c / np.where(lin, b, 1), t / np.where(lin, 1, a))
        r_b = np.where(lin, POINT_AT_INFINITY, np.where(t == 0, 0, c / np.where(t == 0, 1, t)))

    ma, mb = np.abs(r_a), np.abs(r_b)
    tie = np.isclose(ma, mb, rtol=1e-12, atol=1e-15)
    swap = np.where(tie, r_a.imag > r_b.imag, ma > mb)
    z0 = np.where(swap, r_b, r_a)
    z1 = np.where(swap, r_a, r_b)
    return z0, z1


def branches_X(kd: KernelData, y):
    """``(X0(y), X1(y))``: the roots in ``x`` of ``L(x, y) = 0``.

    The discriminant is evaluated as ``(y - 1)^2 q_t(y)``, which keeps full
    relative accuracy near the double root ``y = 1``.
    """
    y = np.asarray(y, dtype=complex)
    disc = (y - 1) ** 2 * P.polyval(y, kd.q_t)
    return _solve_sections(P.polyval(y, kd.alpha_t), P.polyval(y, kd.beta_t), P.polyval(y, kd.gamma_t), disc)


def branches_Y(kd: KernelData, x):
    """``(Y0(x), Y1(x))``: the roots in ``y`` of ``L(x, y) = 0``."""
    x = np.asarray(x, dtype=complex)
    disc = (x - 1) ** 2 * P.polyval(x, kd.q)
    return _solve_sections(P.polyval(x, kd.alpha), P.polyval(x, kd.beta), P.polyval(x, kd.gamma), disc)


def branch_X(kd: KernelData, y, which: int = 0):
    z = branches_X(kd, y)[which]
    return complex(z) if np.ndim(z) == 0 else z


def branch_Y(kd: KernelData, x, which: int = 0):
    z = branches_Y(kd, x)[which]
    return complex(z) if np.ndim(z) == 0 else z


def boundary_curve(kd: KernelData, n_samples: int = 200, *, transposed: bool = False) -> np.ndarray:
    """Points of ``X([y1, 1])`` (``Y([x1, 1])`` if ``transposed``).

    Uses ``n_samples // 2`` midpoints of a uniform partition of ``(y1, 1)``; the
    first half of the output is ``X0``, the second half ``X1``.
    """
    m = max(n_samples // 2, 1)
    lo = kd.x1 if transposed else kd.y1
    t = lo + (1.0 - lo) * (np.arange(m) + 0.5) / m
    z0, z1 = (branches_Y if transposed else branches_X)(kd, t)
    return np.concatenate([z0, z1])


def in_domain(kd: KernelData, x, n_samples: int = 4000, *, transposed: bool = False) -> np.ndarray:
    """Even-odd test for membership of the domain bounded by the boundary curve.

    The curve is closed by walking ``X0`` from ``y1`` to ``1`` and back along
    ``X1``; an unbounded curve is closed through a large arc.  The domain is
    the side containing the real segment from the far branch point to 1.  For
    unbounded curves only points within the sampled range are classified
    reliably.
    """
    m = n_samples // 2
    lo = kd.x1 if transposed else kd.y1
    t = lo + (1.0 - lo) * (np.arange(m) + 0.5) / m
    branches = branches_Y if transposed else branches_X
    z0, z1 = branches(kd, t)
    poly = np.concatenate([z0, z1[::-1]])
    poly = poly[np.isfinite(poly)]
    try:
        unbounded = not np.all(np.isfinite(branches(kd, lo)))
    except BothBranchesInfinite:
        unbounded = True
    if unbounded:
        # unbounded curve: it meets the real axis only at 1, so close it by a
        # large arc through the positive real axis
        radius = 10 * np.max(np.abs(poly))
        phi = abs(np.angle(poly[-1]))
        arc = radius * np.exp(1j * np.linspace(phi, -phi, 64))
        poly = np.concatenate([poly, arc])
    x = np.asarray(x, dtype=complex)
    ax, ay = poly.real, poly.imag
    bx, by = np.roll(ax, -1), np.roll(ay, -1)

    def parity(z):
        px, py = z.real[..., None], z.imag[..., None]
        cond = (ay > py) != (by > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            xc = ax + (py - ay) * (bx - ax) / (by - ay)
        return np.sum(cond & (px < xc), axis=-1) % 2 == 1

    far = kd.y1 if transposed else kd.x1
    ref = np.array([(far + 1) / 2], dtype=complex)
    return parity(x) == parity(ref)[0]


def Q(model: WalkModel, x, y):
    """``x^2 y^2 L(1/x, 1/y)``."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    return sum(v * x ** (1 + i) * y ** (1 + j) for (i, j), v in model.items()) - x * y


def _ratio(num, den, what):
    if np.any(np.abs(den) == 0):
        raise DivisionByZero(f"{what} denominator vanishes")
    return num / den


def xi(model: WalkModel, x, y):
    """Generator fixing ``x`` and swapping the two roots in ``y`` of ``Q``."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    num = sum(model.prob(i, -1) * x**i for i in (-1, 0, 1))
    den = sum(model.prob(i, 1) * x**i for i in (-1, 0, 1))
    if np.any(y == 0):
        raise DivisionByZero("y = 0")
    return x, _ratio(num, den, "xi") / y


def eta(model: WalkModel, x, y):
    """Generator fixing ``y`` and swapping the two roots in ``x`` of ``Q``."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    num = sum(model.prob(-1, j) * y**j for j in (-1, 0, 1))
    den = sum(model.prob(1, j) * y**j for j in (-1, 0, 1))
    if np.any(x == 0):
        raise DivisionByZero("x = 0")
    return _ratio(num, den, "eta") / x, y


def exact_discriminant(model: WalkModel):
    """Discriminant coefficients as Fractions (requires an exact model)."""
    a, b, c = section_polynomials(model.p)
    return [Fraction(v) for v in discriminant(a, b, c)]
