"""Independent checks of the harmonic function.

None of these routines uses the analytic construction: they work directly
with the walk (discrete harmonicity, exit-time dynamic programming, exact
excursion counts, Monte Carlo).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import BoxOverflow
from .harmonic import CoeffGrid, HarmonicSolution, btm_residual, section_x
from .kernel import boundary_curve
from .walk_model import WalkModel

N_MAX_CAP = 2048
EXCURSION_CAP = 512


# -- discrete harmonicity -------------------------------------------------------
@dataclass(frozen=True)
class ResidualReport:
    max_relative_residual: float
    argmax: tuple
    positivity_ok: bool
    boundary_zero_ok: bool

    @property
    def ok(self) -> bool:
        return self.positivity_ok and self.boundary_zero_ok


def _values(grid) -> np.ndarray:
    return grid.values if isinstance(grid, CoeffGrid) else np.asarray(grid, dtype=float)


def harmonicity_residual(grid, model: WalkModel, with_axes: bool = False) -> ResidualReport:
    """Relative defect of ``f = sum_s p[s] f(. + s)`` inside the grid.

    ``grid`` holds ``f(i, j)`` for ``1 <= i, j <= n`` (``values[i-1, j-1]``), or
    ``0 <= i, j <= n`` when ``with_axes`` is set, in which case the axes are
    checked to be zero.  Only cells whose neighbours all lie in the grid are
    tested.
    """
    v = _values(grid)
    if with_axes:
        boundary_ok = bool(np.all(v[0, :] == 0) and np.all(v[:, 0] == 0))
        F = np.array(v, dtype=float)
        F[0, :] = 0
        F[:, 0] = 0
    else:
        boundary_ok = True
        F = np.zeros((v.shape[0] + 1, v.shape[1] + 1))
        F[1:, 1:] = v
    n = F.shape[0] - 1
    if n < 2:
        raise ValueError("grid too small for a residual")
    inner = F[1:n, 1:n]
    S = np.zeros_like(inner)
    for (i, j), p in model.items():
        S += p * F[1 + i:n + i, 1 + j:n + j]
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.abs(S - inner) / np.abs(inner)
    rel = np.where(inner == 0, np.abs(S - inner), rel)
    a, b = np.unravel_index(int(np.argmax(rel)), rel.shape)
    positive = bool(np.all(F[1:, 1:] > 0))
    return ResidualReport(float(rel[a, b]), (int(a) + 1, int(b) + 1), positive, boundary_ok)


# -- exit times ----------------------------------------------------------------------
@dataclass
class TailFit:
    """Survival series ``P[tau > n]`` for ``n = 0 .. n_max`` from one start.

    ``survival`` holds floats, or Fractions in exact mode.  ``exit_mass`` is the
    cumulative mass absorbed on the axes.  ``ratio_table`` is filled by
    :func:`exit_tail_table`.
    """

    start: tuple
    n: np.ndarray
    survival: list
    exit_mass: list
    fitted_slope: float
    kappa_hat: float
    exact: bool
    stderr: np.ndarray | None = None
    ratio_table: dict = field(default_factory=dict)

    def survival_float(self) -> np.ndarray:
        return np.array([float(s) for s in self.survival])


def fit_slope(n, surv, lo: int | None = None, hi: int | None = None) -> float:
    """Least-squares slope of ``log P`` against ``log n`` on ``[lo, hi]``.

    Defaults to the upper dyadic half ``[n_max/2, n_max]``.
    """
    n = np.asarray(n, dtype=float)
    surv = np.asarray(surv, dtype=float)
    hi = int(n[-1]) if hi is None else hi
    lo = max(hi // 2, 1) if lo is None else lo
    sel = (n >= lo) & (n <= hi) & (surv > 0)
    if sel.sum() < 2:
        return math.nan
    return float(np.polyfit(np.log(n[sel]), np.log(surv[sel]), 1)[0])


def _shift_add(Q, P, i, j, v):
    """``Q[x + (i, j)] += v * P[x]`` on a common box."""
    B, C = P.shape
    Q[max(i, 0):B + min(i, 0), max(j, 0):C + min(j, 0)] += v * P[max(-i, 0):B - max(i, 0), max(-j, 0):C - max(j, 0)]


def _integer_weights(model: WalkModel):
    fr = {s: Fraction(v) for s, v in model.p.items() if v != 0}
    den = math.lcm(*(q.denominator for q in fr.values()))
    return {s: int(q * den) for s, q in fr.items()}, den


def exit_tail_dp(model: WalkModel, start=(1, 1), n_max: int = 512, exact: bool = False,
                 theta: float | None = None) -> TailFit:
    """Forward dynamic programme for the mass still inside the open quadrant.

    The box has side ``max(start) + n_max + 1`` so the walk cannot reach its
    far edges; mass landing on an axis is moved to ``exit_mass``.  In exact mode
    the weights are integers over the common denominator of the model and the
    survival probabilities are returned as Fractions.
    """
    if n_max < 1:
        raise ValueError("n_max must be positive")
    if n_max > N_MAX_CAP:
        raise BoxOverflow(f"n_max = {n_max} exceeds the cap {N_MAX_CAP}")
    i0, j0 = start
    if i0 < 1 or j0 < 1:
        raise ValueError("start must lie in the open quadrant")
    side = max(i0, j0) + n_max + 2
    if exact:
        weights, den = _integer_weights(model)
        P = np.zeros((side, side), dtype=object)
        P[:] = 0
        P[i0, j0] = 1
        steps = list(weights.items())
    else:
        P = np.zeros((side, side))
        P[i0, j0] = 1.0
        steps = model.items()
    alive = [P.sum()]
    dead = [P.sum() * 0]
    for _ in range(n_max):
        Q = np.zeros_like(P)
        if exact:
            Q[:] = 0
        for (i, j), v in steps:
            _shift_add(Q, P, i, j, v)
        lost = Q[0, :].sum() + Q[1:, 0].sum()
        Q[0, :] = 0
        Q[:, 0] = 0
        P = Q
        alive.append(P.sum())
        dead.append(dead[-1] * (den if exact else 1) + lost)
    n = np.arange(n_max + 1)
    if exact:
        dens = [den ** int(k) for k in n]
        survival = [Fraction(int(a), d) for a, d in zip(alive, dens)]
        exit_mass = [Fraction(int(a), d) for a, d in zip(dead, dens)]
    else:
        survival = [float(a) for a in alive]
        exit_mass = [float(a) for a in dead]
    surv_f = np.array([float(s) for s in survival])
    slope = fit_slope(n[1:], surv_f[1:])
    kappa = math.nan
    if theta is not None:
        kappa = float(surv_f[-1] * n_max ** (math.pi / (2 * theta)))
    return TailFit(tuple(start), n, survival, exit_mass, slope, kappa, exact)


def exit_tail_table(model: WalkModel, starts, n_max: int = 512, theta: float | None = None) -> dict:
    """Float DP from several starts; fills each ``ratio_table`` relative to ``(1, 1)``."""
    starts = [tuple(s) for s in starts]
    if (1, 1) not in starts:
        starts = [(1, 1)] + starts
    fits = {s: exit_tail_dp(model, s, n_max, theta=theta) for s in starts}
    ref = fits[(1, 1)].survival[-1]
    table = {s: fits[s].survival[-1] / ref for s in starts}
    for fit in fits.values():
        fit.ratio_table = dict(table)
    return fits


def exit_tail_mc(model: WalkModel, start=(1, 1), n_max: int = 2, samples: int = 10**6,
                 seed: int = 20240601, chunk: int = 250_000) -> TailFit:
    """Monte Carlo survival curve with binomial standard errors.

    Deterministic for fixed ``(seed, samples, chunk)``.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    rng = np.random.default_rng(seed)
    steps = np.array([s for s, _ in model.items()])
    probs = np.array([p for _, p in model.items()])
    probs = probs / probs.sum()
    counts = np.zeros(n_max + 1, dtype=np.int64)
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        x = np.full(m, start[0])
        y = np.full(m, start[1])
        alive = np.ones(m, dtype=bool)
        counts[0] += m
        for t in range(1, n_max + 1):
            k = rng.choice(len(steps), size=m, p=probs)
            x = x + steps[k, 0]
            y = y + steps[k, 1]
            alive &= (x > 0) & (y > 0)
            counts[t] += int(alive.sum())
        done += m
    surv = counts / samples
    stderr = np.sqrt(surv * (1 - surv) / samples)
    n = np.arange(n_max + 1)
    slope = fit_slope(n[1:], surv[1:]) if n_max >= 4 else math.nan
    return TailFit(tuple(start), n, surv.tolist(), (1 - surv).tolist(), slope, math.nan, False, stderr)


# -- excursions ------------------------------------------------------------------------
@dataclass(frozen=True)
class ExcursionTable:
    """Exact counts ``counts[start][n]`` of ``n``-step paths from ``start`` to ``end``."""

    end: tuple
    n_max: int
    mode: str
    counts: dict

    def ratio(self, start, ref=(1, 1), n: int | None = None) -> float:
        n = self.n_max if n is None else n
        return Fraction(self.counts[tuple(start)][n], self.counts[tuple(ref)][n])


def excursions(model: WalkModel, starts, end=(1, 1), n_max: int = 2, mode: str = "strict") -> ExcursionTable:
    """Count paths with unit weight per allowed step that stay in the cone.

    ``mode="strict"`` keeps paths in ``{i, j >= 1}``; ``mode="axes"`` allows the
    axes, ``{i, j >= 0}``.  The count is computed backwards from ``end``, which
    yields every start at once.
    """
    if n_max > EXCURSION_CAP:
        raise BoxOverflow(f"n_max = {n_max} exceeds the cap {EXCURSION_CAP}")
    if mode not in ("strict", "axes"):
        raise ValueError("mode must be 'strict' or 'axes'")
    low = 1 if mode == "strict" else 0
    starts = [tuple(s) for s in starts]
    for s in list(starts) + [tuple(end)]:
        if min(s) < low:
            raise ValueError(f"point {s} is outside the cone")
    side = max(max(max(s) for s in starts), max(end)) + n_max + 2
    steps = [s for s, _ in model.items()]
    R = np.zeros((side, side), dtype=object)
    R[:] = 0
    R[tuple(end)] = 1
    counts = {s: [int(R[s])] for s in starts}
    for _ in range(n_max):
        Q = np.zeros_like(R)
        Q[:] = 0
        for i, j in steps:
            # paths from x: first step s, then from x + s
            _shift_add(Q, R, -i, -j, 1)
        if low == 1:
            Q[0, :] = 0
            Q[:, 0] = 0
        R = Q
        for s in starts:
            counts[s].append(int(R[s]))
    return ExcursionTable(tuple(end), n_max, mode, counts)


# -- cross checks ------------------------------------------------------------------------
@dataclass(frozen=True)
class RatioReport:
    rows: list  # (start, observed, expected, abs_dev, rel_dev)

    @property
    def max_abs(self) -> float:
        return max((r[3] for r in self.rows), default=0.0)

    @property
    def max_rel(self) -> float:
        return max((r[4] for r in self.rows), default=0.0)


def ratio_check(f, observed: dict) -> RatioReport:
    """Compare observed ratios against ``f(i, j) / f(1, 1)``.

    ``f`` is a :class:`CoeffGrid` or any callable ``f(i, j)``; ``observed`` maps
    starts to ratios (``TailFit.ratio_table`` or :func:`excursion_ratios`).
    """
    rows = []
    ref = f(1, 1)
    for s, obs in observed.items():
        if tuple(s) == (1, 1):
            continue
        exp = f(*s) / ref
        obs = float(obs)
        rows.append((tuple(s), obs, exp, abs(obs - exp), abs(obs - exp) / abs(exp)))
    return RatioReport(rows)


def excursion_ratios(table: ExcursionTable, n: int | None = None) -> dict:
    return {s: float(table.ratio(s, n=n)) for s in table.counts}


def bvp_residual(sol: HarmonicSolution, n_samples: int = 200) -> float:
    """Largest relative imaginary part of ``L(x,0) H(x,0)`` on the boundary curve."""
    x = boundary_curve(sol.kd, n_samples)
    v = section_x(sol, x)
    return float(np.max(np.abs(v.imag) / np.maximum(1.0, np.abs(v))))


def btm_check(sol: HarmonicSolution, n_samples: int = 50) -> float:
    """Largest absolute value of the kernel-curve identity on ``y`` in ``(y1, 1)``."""
    y1 = sol.kd.y1
    ys = y1 + (1 - y1) * (np.arange(n_samples) + 0.5) / n_samples
    return float(np.max(np.abs(btm_residual(sol, ys))))
