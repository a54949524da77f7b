from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quadrant_harmonic.errors import (
    DegenerateSteps,
    NegativeProbability,
    NonZeroDrift,
    ParseError,
    SumNotOne,
    UnknownModel,
)
from quadrant_harmonic.walk_model import (
    CATALOG,
    STEPS,
    WalkModel,
    catalog,
    format_config,
    moments,
    parse_config,
    transpose,
    validate,
)

from .conftest import zero_drift_models

Q = Fraction(1, 4)
T = Fraction(1, 3)


def test_srw_moments_exact():
    mom = validate(catalog("srw"))
    assert (mom.drift_x, mom.drift_y, mom.m_xy) == (0, 0, 0)
    assert mom.m_xx == mom.m_yy == 0.5


def test_tandem_moments():
    # direct summation over the three steps (1,0), (-1,1), (0,-1)
    mom = validate(catalog("tandem"))
    assert mom.m_xy == pytest.approx(-1 / 3, abs=1e-15)
    assert mom.m_xx == pytest.approx(2 / 3, abs=1e-15)
    assert mom.m_yy == pytest.approx(2 / 3, abs=1e-15)


def test_single_step_is_degenerate():
    with pytest.raises(DegenerateSteps):
        validate(WalkModel({(1, 1): 1}))


@pytest.mark.parametrize(
    "p, error",
    [
        ({(1, 0): Fraction(1, 2), (-1, 0): Fraction(3, 4), (0, 1): Fraction(-1, 4)}, NegativeProbability),
        ({(1, 0): Q, (-1, 0): Q, (0, 1): Q, (0, -1): Fraction(1, 8)}, SumNotOne),
        ({(1, 0): 0.25, (-1, 0): 0.25, (0, 1): 0.25, (0, -1): 0.25 + 1e-9}, SumNotOne),
        ({(1, 0): Fraction(1, 2), (-1, 0): Fraction(1, 2)}, DegenerateSteps),
        ({(1, 0): Fraction(2, 5), (-1, 0): Fraction(1, 5), (0, 1): Fraction(1, 5), (0, -1): Fraction(1, 5)},
         NonZeroDrift),
    ],
)
def test_validation_errors(p, error):
    with pytest.raises(error):
        validate(WalkModel(p))


def test_nonzero_drift_allowed_when_not_required():
    m = WalkModel({(1, 0): Fraction(2, 5), (-1, 0): Fraction(1, 5), (0, 1): Fraction(1, 5), (0, -1): Fraction(1, 5)})
    mom = validate(m, require_zero_drift=False)
    assert mom.drift_x == pytest.approx(0.2)


def test_three_zeros_wrapping_around_is_degenerate():
    # zeros at (-1,1), (0,1), (1,1): consecutive only cyclically
    m = WalkModel({(1, 0): Q, (1, -1): Q, (-1, -1): Q, (-1, 0): Q})
    with pytest.raises(DegenerateSteps):
        validate(m, require_zero_drift=False)


def test_two_consecutive_zeros_are_fine():
    validate(catalog("tandem"))
    validate(catalog("diagonal"))


def test_transpose_examples():
    assert transpose(catalog("srw")) == catalog("srw")
    assert transpose(catalog("tandem")) == WalkModel({(0, 1): T, (1, -1): T, (-1, 0): T})
    assert transpose(catalog("gessel")) == WalkModel({(1, 1): Q, (0, 1): Q, (-1, -1): Q, (0, -1): Q})


@given(zero_drift_models)
def test_transpose_is_involution(m):
    assert transpose(transpose(m)) == m
    assert moments(transpose(m)).m_xx == moments(m).m_yy


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_catalog_models_are_valid_and_exact(name):
    m = catalog(name)
    assert m.exact
    validate(m)


def test_catalog_gessel_exact():
    assert catalog("gessel") == WalkModel({(1, 1): Q, (1, 0): Q, (-1, -1): Q, (-1, 0): Q})


def test_catalog_unknown():
    with pytest.raises(UnknownModel):
        catalog("kreweras-with-drift")


def test_parse_config_roundtrip():
    text = "name tandem copy\nstep 1 0 1/3\nstep -1 1 1/3  # comment\n\nstep 0 -1 1/3\n"
    m = parse_config(text)
    assert m == catalog("tandem")
    assert m.name == "tandem copy"
    assert parse_config(format_config(m)) == m


def test_parse_decimal_is_exact():
    m = parse_config("step 1 0 0.3\nstep -1 0 0.3\nstep 0 1 0.2\nstep 0 -1 0.2\n")
    assert m.exact
    validate(m)


@pytest.mark.parametrize(
    "text, line",
    [
        ("step 1 0 1/2\nstep 2 0 1/2\n", 2),
        ("step 1 0\n", 1),
        ("step 1 0 1/4\nstep 1 0 1/4\n", 2),
        ("stride 1 0 1/4\n", 1),
        ("name srw\nstep 1 0 abc\n", 2),
        ("step x 0 1/4\n", 1),
    ],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as info:
        parse_config(text)
    assert info.value.line == line


@given(st.lists(st.integers(0, 5), min_size=8, max_size=8).filter(lambda w: sum(w) > 0))
def test_exact_sum_check(weights):
    total = sum(weights)
    m = WalkModel({s: Fraction(w, total) for s, w in zip(STEPS, weights)})
    assert sum(m.p.values()) == 1
    try:
        validate(m, require_zero_drift=False)
    except DegenerateSteps:
        pass
