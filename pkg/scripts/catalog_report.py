"""Summary table for the catalog walks: angle, group, map constants and checks."""

import argparse

from quadrant_harmonic import oracle
from quadrant_harmonic.classify import angle, classify
from quadrant_harmonic.conformal import growth_constant, growth_exponent
from quadrant_harmonic.harmonic import extract_coefficients, solve
from quadrant_harmonic.walk_model import CATALOG, catalog, validate


def report(name, n):
    m = catalog(name)
    rep = classify(angle(validate(m))).as_dict()
    sol = solve(m)
    grid = extract_coefficients(sol, n)
    c, _ = growth_constant(sol.w)
    return {
        "model": name,
        "theta_over_pi": rep["theta_over_pi"],
        "group_order": rep["group_order"],
        "nature": rep["nature"],
        "x1": sol.kd.x1,
        "x4": sol.kd.x4,
        "map_case": sol.w.case,
        "c_closed": sol.w.growth_constant_c,
        "c_limit": c,
        "growth_exponent": growth_exponent(sol.w),
        "mu": sol.mu,
        "nu": sol.nu,
        "f12": grid(1, 2),
        "f22": grid(2, 2),
        "harmonicity": oracle.harmonicity_residual(grid, m).max_relative_residual,
        "btm": oracle.btm_check(sol),
        "bvp_imag": oracle.bvp_residual(sol),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=30, help="grid size for the residual")
    args = parser.parse_args()
    rows = [report(name, args.n) for name in sorted(CATALOG)]
    keys = list(rows[0])
    print(",".join(keys))
    for row in rows:
        print(",".join(f"{v:.10g}" if isinstance(v, float) else str(v) for v in row.values()))


if __name__ == "__main__":
    main()
