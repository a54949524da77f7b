"""Command line entry point.

Reports are ``key=value`` lines followed by CSV blocks, numbers printed with 12
significant digits.  Exit status: 0 success, 1 invalid input, 2 numerical
failure.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import oracle
from .classify import angle, classify
from .conformal import growth_constant, growth_exponent
from .drifted_srw import DriftedSRW, f_gamma_grid, gamma_family
from .errors import NumericalError, ParseError, QuadrantError, ValidationError, VerificationFailed
from .harmonic import extract_coefficients, solve
from .kernel import build_kernel
from .walk_model import catalog, load_config, validate

DEFAULT_SEED = 20240601


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{float(v):.12g}"
    if isinstance(v, tuple):
        return ",".join(fmt(u) for u in v)
    return str(v)


@dataclass
class RunConfig:
    command: str
    model: str | None = None
    file: str | None = None
    params: dict = field(default_factory=dict)
    output: str | None = None


class Report:
    def __init__(self):
        self.buf = io.StringIO()

    def kv(self, key, value):
        self.buf.write(f"{key}={fmt(value)}\n")

    def csv(self, header, rows):
        self.buf.write(",".join(header) + "\n")
        for row in rows:
            self.buf.write(",".join(fmt(v) for v in row) + "\n")

    def text(self) -> str:
        return self.buf.getvalue()


def _point(text: str) -> tuple:
    try:
        i, j = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected i,j but got {text!r}") from None
    return (i, j)


def _points(text: str) -> list:
    return [_point(t) for t in text.split(";") if t.strip()]


def _load(cfg: RunConfig):
    if (cfg.model is None) == (cfg.file is None):
        raise SystemExit("exactly one of --model or --file is required")
    if cfg.model is not None:
        return catalog(cfg.model)
    try:
        return load_config(cfg.file)
    except OSError as exc:
        raise ParseError(f"cannot read {cfg.file}: {exc.strerror}") from None


def _cmd_validate(cfg, rep):
    model = _load(cfg)
    mom = validate(model, require_zero_drift=not cfg.params.get("allow_drift", False))
    rep.kv("name", model.name or "")
    rep.kv("exact", model.exact)
    for key in ("drift_x", "drift_y", "m_xy", "m_xx", "m_yy"):
        rep.kv(key, getattr(mom, key))
    rep.kv("status", "ok")


def _cmd_classify(cfg, rep):
    model = _load(cfg)
    mom = validate(model)
    kd = build_kernel(model)
    report = classify(angle(mom), cfg.params.get("cap", 100))
    for key, value in report.as_dict().items():
        rep.kv(key, value)
    rep.kv("x1", kd.x1)
    rep.kv("x4", kd.x4)
    rep.kv("y1", kd.y1)
    rep.kv("y4", kd.y4)


def _solution_summary(sol, rep):
    rep.kv("theta", sol.theta)
    rep.kv("pi_over_theta", sol.w.k)
    rep.kv("map_case", sol.w.case)
    rep.kv("c", sol.w.growth_constant_c)
    rep.kv("mu", sol.mu)
    rep.kv("nu", sol.nu)
    rep.kv("mu_tilde", sol.mu_t)
    rep.kv("nu_tilde", sol.nu_t)


def _cmd_harmonic(cfg, rep):
    model = _load(cfg)
    n = cfg.params["n"]
    sol = solve(model, scale=cfg.params.get("scale", 1.0))
    grid = extract_coefficients(sol, n, radius=cfg.params.get("radius", 0.9))
    _solution_summary(sol, rep)
    rep.kv("n", n)
    rep.kv("torus_radius", grid.radius)
    rep.kv("fft_size", grid.m)
    rep.kv("imag_residue", grid.imag_residue)
    rep.csv(["i", "j", "f"], ((i, j, grid.values[i - 1, j - 1])
                              for i in range(1, n + 1) for j in range(1, n + 1)))


def _cmd_verify(cfg, rep):
    model = _load(cfg)
    n = cfg.params["n"]
    sol = solve(model)
    grid = extract_coefficients(sol, n)
    res = oracle.harmonicity_residual(grid, model)
    c_est, c_err = growth_constant(sol.w)
    checks = {
        "harmonicity_residual": (res.max_relative_residual, 1e-6),
        "bvp_imaginary": (oracle.bvp_residual(sol), 1e-8),
        "btm_residual": (oracle.btm_check(sol), 1e-6),
        "mu_mismatch": (abs(sol.mu - sol.mu_t) / abs(sol.mu), 1e-6),
        "growth_exponent_error": (abs(growth_exponent(sol.w) - sol.w.k), 1e-3),
    }
    _solution_summary(sol, rep)
    rep.kv("c_richardson", c_est)
    rep.kv("c_richardson_error", c_err)
    rep.kv("residual_argmax", res.argmax)
    rep.kv("positivity", res.positivity_ok)
    failed = []
    for key, (value, tol) in checks.items():
        rep.kv(key, value)
        if not value <= tol:
            failed.append(f"{key}={fmt(value)}>{tol:g}")
    if not res.positivity_ok:
        failed.append("positivity")
    rep.kv("status", "ok" if not failed else "failed")
    if failed:
        raise VerificationFailed("; ".join(failed))


def _cmd_exit_time(cfg, rep):
    model = _load(cfg)
    p = cfg.params
    theta = angle(validate(model))
    start, n = p["start"], p["n"]
    fit = oracle.exit_tail_dp(model, start, n, exact=p.get("exact", False), theta=theta)
    rep.kv("start", start)
    rep.kv("n_max", n)
    rep.kv("exact", fit.exact)
    rep.kv("fitted_slope", fit.fitted_slope)
    rep.kv("target_slope", -math.pi / (2 * theta))
    rep.kv("kappa_hat", fit.kappa_hat)
    rep.kv("mass_defect", float(abs(fit.survival[-1] + fit.exit_mass[-1] - 1)))
    if p.get("ratio_starts"):
        fits = oracle.exit_tail_table(model, [start] + p["ratio_starts"], n, theta)
        for s, ratio in fits[(1, 1)].ratio_table.items():
            rep.kv(f"ratio_{s[0]}_{s[1]}", ratio)
    header = ["n", "survival"]
    mc = None
    if p.get("mc"):
        mc = oracle.exit_tail_mc(model, start, n, p["mc"], p.get("seed", DEFAULT_SEED))
        header += ["mc", "mc_stderr"]
        rep.kv("mc_samples", p["mc"])
        rep.kv("mc_seed", p.get("seed", DEFAULT_SEED))
    rows = []
    for k in range(n + 1):
        row = [k, fit.survival[k]]
        if mc is not None:
            row += [mc.survival[k], mc.stderr[k]]
        rows.append(row)
    rep.csv(header, rows)


def _cmd_excursions(cfg, rep):
    model = _load(cfg)
    p = cfg.params
    starts = p.get("starts") or [(1, 1)]
    mode = "axes" if p.get("axes") else "strict"
    table = oracle.excursions(model, starts, p["end"], p["n"], mode)
    rep.kv("end", table.end)
    rep.kv("n_max", table.n_max)
    rep.kv("mode", mode)
    if (1, 1) in table.counts:
        for s in table.counts:
            if s != (1, 1) and table.counts[(1, 1)][-1]:
                rep.kv(f"ratio_{s[0]}_{s[1]}", float(table.ratio(s)))
    header = ["n"] + [f"N_{s[0]}_{s[1]}" for s in table.counts]
    rep.csv(header, ([k] + [table.counts[s][k] for s in table.counts] for k in range(table.n_max + 1)))


def _cmd_drifted(cfg, rep):
    p = cfg.params
    if p.get("probs"):
        m = DriftedSRW(*p["probs"])
    else:
        m = DriftedSRW.symmetric(p["drift"])
    variant = "printed" if p.get("printed") else "adjudicated"
    with warnings.catch_warnings(record=True):
        warnings.simplefilter("always")
        fam = gamma_family(m, p["gamma"], variant)
    n = p["n"]
    grid = f_gamma_grid(fam, n)
    res = oracle.harmonicity_residual(grid, m.walk())
    rep.kv("p10", m.p10)
    rep.kv("pm10", m.pm10)
    rep.kv("p01", m.p01)
    rep.kv("p0m1", m.p0m1)
    rep.kv("gamma", fam.gamma)
    rep.kv("variant", variant)
    for key in ("r", "r_t", "r_t_printed", "s_plus", "s_minus", "st_plus", "st_minus"):
        rep.kv(key, getattr(fam, key))
    rep.kv("formula_inconsistency", fam.inconsistency is not None)
    if fam.inconsistency is not None:
        rep.kv("inconsistency_defect", fam.inconsistency.defect)
        rep.kv("r_t_corrected", fam.inconsistency.corrected)
    rep.kv("harmonicity_residual", res.max_relative_residual)
    rep.csv(["i", "j", "f"], ((i, j, grid[i - 1, j - 1]) for i in range(1, n + 1) for j in range(1, n + 1)))


COMMANDS = {
    "validate": _cmd_validate,
    "classify": _cmd_classify,
    "harmonic": _cmd_harmonic,
    "verify": _cmd_verify,
    "exit-time": _cmd_exit_time,
    "excursions": _cmd_excursions,
    "drifted-srw": _cmd_drifted,
}


def run(cfg: RunConfig) -> tuple[int, str, str]:
    """Execute one command; returns ``(status, stdout_text, stderr_text)``."""
    rep = Report()
    try:
        COMMANDS[cfg.command](cfg, rep)
    except ValidationError as exc:
        return 1, rep.text(), f"error={exc.symbol} {exc}\n"
    except NumericalError as exc:
        return 2, rep.text(), f"error={exc.symbol} {exc}\n"
    except ValueError as exc:  # argument out of range, e.g. gamma or a start off the cone
        return 1, rep.text(), f"error=InvalidArgument {exc}\n"
    except QuadrantError as exc:  # pragma: no cover - every error has a category
        return 2, rep.text(), f"error={exc.symbol} {exc}\n"
    return 0, rep.text(), ""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quadrant-harmonic", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def model_args(sp):
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--model", help="catalog model: srw, diagonal, tandem, gessel")
        g.add_argument("--file", help="model file with 'step i j prob' lines")
        sp.add_argument("--output", help="write the report here instead of stdout")

    sp = sub.add_parser("validate", help="check a model and print its moments")
    model_args(sp)
    sp.add_argument("--allow-drift", action="store_true")

    sp = sub.add_parser("classify", help="angle, group order and nature")
    model_args(sp)
    sp.add_argument("--cap", type=int, default=100, help="denominator cap")

    sp = sub.add_parser("harmonic", help="harmonic function values f(i,j)")
    model_args(sp)
    sp.add_argument("--n", type=int, default=10)
    sp.add_argument("--radius", type=float, default=0.9)
    sp.add_argument("--scale", type=float, default=1.0)

    sp = sub.add_parser("verify", help="consistency checks of the analytic solution")
    model_args(sp)
    sp.add_argument("--n", type=int, default=30)

    sp = sub.add_parser("exit-time", help="survival probabilities of the killed walk")
    model_args(sp)
    sp.add_argument("--start", type=_point, default=(1, 1))
    sp.add_argument("--n", type=int, default=512)
    sp.add_argument("--exact", action="store_true")
    sp.add_argument("--ratio-starts", type=_points, default=None, help="e.g. '1,2;2,1;2,2'")
    sp.add_argument("--mc", type=int, default=0, help="Monte Carlo samples")
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)

    sp = sub.add_parser("excursions", help="exact excursion counts")
    model_args(sp)
    sp.add_argument("--start", dest="starts", type=_points, default=None, help="e.g. '1,1;2,2'")
    sp.add_argument("--end", type=_point, default=(1, 1))
    sp.add_argument("--n", type=int, default=64)
    sp.add_argument("--axes", action="store_true", help="allow paths to touch the axes")

    sp = sub.add_parser("drifted-srw", help="harmonic functions of the drifted simple walk")
    sp.add_argument("--gamma", type=float, default=math.pi / 4)
    sp.add_argument("--drift", type=float, default=0.1)
    sp.add_argument("--probs", type=lambda s: tuple(float(v) for v in s.split(",")), default=None,
                    help="p10,pm10,p01,p0m1 (overrides --drift)")
    sp.add_argument("--n", type=int, default=10)
    sp.add_argument("--printed", action="store_true", help="keep r_tilde with p10 in its denominator")
    sp.add_argument("--output")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    params = {k: v for k, v in vars(ns).items() if k not in ("command", "model", "file", "output")}
    return RunConfig(ns.command, getattr(ns, "model", None), getattr(ns, "file", None), params,
                     getattr(ns, "output", None))


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    cfg = config_from_args(ns)
    status, out, err = run(cfg)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return status


if __name__ == "__main__":
    sys.exit(main())
