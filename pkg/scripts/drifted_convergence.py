"""Drifted simple walk: harmonicity of ``f_gamma`` and convergence to ``i j``.

The first table gives the harmonicity residual of each ``f_gamma`` for both
choices of ``r_tilde``.  The second gives ``max |f_gamma - i j|`` on a box
as the drift ``eps`` shrinks, together with ``error / eps``.
"""

import argparse
import math
import warnings

import numpy as np

from quadrant_harmonic.drifted_srw import DriftedSRW, convergence_check, f_gamma_grid, gamma_family
from quadrant_harmonic.errors import FormulaInconsistencyWarning, RootFindingFailure
from quadrant_harmonic.oracle import harmonicity_residual


def residual(model, gamma, variant, n):
    try:
        fam = gamma_family(model, gamma, variant, warn=False)
    except RootFindingFailure:
        return math.nan
    return harmonicity_residual(f_gamma_grid(fam, n), model.walk()).max_relative_residual


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--probs", default="0.3,0.2,0.35,0.15", help="p10,pm10,p01,p0m1")
    parser.add_argument("--n", type=int, default=30)
    parser.add_argument("--box", type=int, default=10)
    args = parser.parse_args()
    warnings.simplefilter("ignore", FormulaInconsistencyWarning)

    model = DriftedSRW(*(float(v) for v in args.probs.split(",")))
    print("gamma,residual_adjudicated,residual_printed")
    for gamma in np.linspace(0, math.pi / 2, 20):
        a = residual(model, float(gamma), "adjudicated", args.n)
        b = residual(model, float(gamma), "printed", args.n)
        print(f"{gamma:.6f},{a:.3e},{b:.3e}")

    eps = [0.1, 0.05, 0.025, 1e-2, 1e-3, 1e-4, 1e-5]
    print()
    print("gamma,eps,max_error,error_over_eps")
    for gamma in (0.0, math.pi / 8, math.pi / 4, math.pi / 2):
        for e, err in zip(eps, convergence_check(eps, gamma, args.box)):
            print(f"{gamma:.6f},{e:g},{err:.6g},{err / e:.6g}")


if __name__ == "__main__":
    main()
