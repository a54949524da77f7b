"""Exit-time tails of the killed walk against the harmonic function.

Prints the fitted tail slope next to ``-pi/(2 theta)`` and the survival ratios
``P[tau_x > n] / P[tau_(1,1) > n]`` next to ``f(x) / f(1,1)``.
"""

import argparse
import math
import time

from quadrant_harmonic.classify import angle
from quadrant_harmonic.harmonic import extract_coefficients, solve
from quadrant_harmonic.oracle import exit_tail_mc, exit_tail_table, ratio_check
from quadrant_harmonic.walk_model import catalog, validate

STARTS = [(1, 2), (2, 1), (2, 2), (3, 1), (3, 3)]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--models", default="srw,tandem,gessel,diagonal")
    parser.add_argument("--n", type=int, default=512)
    parser.add_argument("--mc", type=int, default=0, help="Monte Carlo samples for a cross check")
    args = parser.parse_args()

    print("model,start,n,observed_ratio,f_ratio,rel_dev,fitted_slope,target_slope,seconds")
    for name in args.models.split(","):
        m = catalog(name)
        theta = angle(validate(m))
        t0 = time.perf_counter()
        fits = exit_tail_table(m, STARTS, args.n, theta)
        elapsed = time.perf_counter() - t0
        grid = extract_coefficients(solve(m), 4)
        rep = ratio_check(grid, fits[(1, 1)].ratio_table)
        slope = fits[(1, 1)].fitted_slope
        for start, obs, exp, _, rel in rep.rows:
            print(f"{name},{start[0]};{start[1]},{args.n},{obs:.6f},{exp:.6f},{rel:.4f},"
                  f"{slope:.5f},{-math.pi / (2 * theta):.5f},{elapsed:.1f}")
        if args.mc:
            mc = exit_tail_mc(m, (1, 1), min(args.n, 64), args.mc)
            dp = fits[(1, 1)].survival[min(args.n, 64)]
            z = abs(mc.survival[-1] - dp) / mc.stderr[-1]
            print(f"# {name}: MC P[tau>{min(args.n, 64)}]={mc.survival[-1]:.5f} DP={dp:.5f} z={z:.2f}")


if __name__ == "__main__":
    main()
