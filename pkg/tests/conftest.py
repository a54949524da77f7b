import functools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from quadrant_harmonic.errors import DegenerateSteps
from quadrant_harmonic.harmonic import extract_coefficients, solve
from quadrant_harmonic.walk_model import CATALOG, WalkModel, catalog, reverse, transpose, validate

settings.register_profile("default", deadline=None, max_examples=25,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

CATALOG_NAMES = sorted(CATALOG)

# zero-drift building blocks: centrally symmetric pairs plus the asymmetric catalog walks
_PAIRS = [((1, 0), (-1, 0)), ((0, 1), (0, -1)), ((1, 1), (-1, -1)), ((1, -1), (-1, 1))]
_ASYM = [catalog("tandem"), catalog("gessel"), transpose(catalog("tandem")),
         transpose(catalog("gessel")), reverse(catalog("tandem")), reverse(catalog("gessel"))]


def mixture(weights) -> WalkModel:
    """Exact convex combination of zero-drift building blocks."""
    p = {}
    for w, (a, b) in zip(weights[:4], _PAIRS):
        p[a] = p.get(a, 0) + Fraction(w, 2)
        p[b] = p.get(b, 0) + Fraction(w, 2)
    for w, base in zip(weights[4:], _ASYM):
        for s, v in base.p.items():
            p[s] = p.get(s, 0) + w * v
    total = sum(p.values())
    return WalkModel({s: v / total for s, v in p.items()})


def _valid(weights) -> bool:
    if sum(weights) == 0:
        return False
    try:
        validate(mixture(weights))
    except DegenerateSteps:
        return False
    return True


zero_drift_models = (
    st.lists(st.integers(0, 3), min_size=10, max_size=10).filter(_valid).map(mixture)
)


@functools.lru_cache(maxsize=None)
def cached_solution(name: str, scale: float = 1.0):
    return solve(catalog(name), scale)


@functools.lru_cache(maxsize=None)
def cached_grid(name: str, n: int):
    return extract_coefficients(cached_solution(name), n)


@pytest.fixture(params=CATALOG_NAMES)
def catalog_name(request):
    return request.param


def ij(n):
    idx = np.arange(1, n + 1)
    return np.outer(idx, idx).astype(float)


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(test_acceptance.RESULTS, key=lambda k: (int(k.split("-")[0].rstrip("abc")), k)):
            terminalreporter.write_line(test_acceptance.RESULTS[key])
