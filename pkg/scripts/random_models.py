"""Stress test on random zero-drift walks.

Each model is an exact convex combination, with random integer weights, of
centrally symmetric step pairs and of the catalog walks with their transposes
and reversals.  For each model the harmonic function is extracted and checked
for harmonicity, positivity and ``mu == mu_tilde``.
"""

import argparse
import time
from fractions import Fraction

import numpy as np

from quadrant_harmonic.errors import DegenerateSteps, QuadrantError
from quadrant_harmonic.harmonic import extract_coefficients, solve
from quadrant_harmonic.oracle import harmonicity_residual
from quadrant_harmonic.walk_model import CATALOG, WalkModel, catalog, format_config, reverse, transpose, validate

PAIRS = [((1, 0), (-1, 0)), ((0, 1), (0, -1)), ((1, 1), (-1, -1)), ((1, -1), (-1, 1))]


def bases():
    out = [catalog(k) for k in sorted(CATALOG)]
    for name in ("tandem", "gessel"):
        out += [transpose(catalog(name)), reverse(catalog(name))]
    return out


def random_model(rng, base_models):
    w = rng.integers(0, 4, size=len(PAIRS) + len(base_models))
    p = {}
    for k, (a, b) in enumerate(PAIRS):
        p[a] = p.get(a, 0) + Fraction(int(w[k]), 2)
        p[b] = p.get(b, 0) + Fraction(int(w[k]), 2)
    for k, base in enumerate(base_models):
        for s, v in base.p.items():
            p[s] = p.get(s, 0) + int(w[len(PAIRS) + k]) * v
    total = sum(p.values())
    if total == 0:
        return None
    m = WalkModel({s: v / total for s, v in p.items()})
    try:
        validate(m)
    except DegenerateSteps:
        return None
    return m


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=200)
    parser.add_argument("--n", type=int, default=30)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--tol", type=float, default=1e-6)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    base_models = bases()
    worst, failures, tried = 0.0, 0, 0
    t0 = time.perf_counter()
    while tried < args.count:
        m = random_model(rng, base_models)
        if m is None:
            continue
        tried += 1
        try:
            sol = solve(m)
            res = harmonicity_residual(extract_coefficients(sol, args.n), m)
        except QuadrantError as exc:
            failures += 1
            print(f"# error={exc.symbol} {exc}\n{format_config(m)}")
            continue
        worst = max(worst, res.max_relative_residual)
        if (res.max_relative_residual > args.tol or not res.positivity_ok
                or abs(sol.mu - sol.mu_t) > args.tol * abs(sol.mu)):
            failures += 1
            print(f"# failed residual={res.max_relative_residual:.3e}\n{format_config(m)}")
    print(f"models={tried}")
    print(f"failures={failures}")
    print(f"worst_residual={worst:.3e}")
    print(f"seconds={time.perf_counter() - t0:.1f}")


if __name__ == "__main__":
    main()
