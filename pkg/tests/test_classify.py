import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quadrant_harmonic.classify import angle, classify, homogeneity_diagnostic
from quadrant_harmonic.errors import CorrelationOutOfRange
from quadrant_harmonic.walk_model import Moments, WalkModel, catalog, validate

from .conftest import ij, zero_drift_models

KREWERAS = WalkModel({(-1, 0): 1, (0, -1): 1, (1, 1): 1})


@pytest.mark.parametrize(
    "model, theta_over_pi, rationality, order, nature",
    [
        (catalog("srw"), 1 / 2, "Integer", 4, "rational"),
        (catalog("diagonal"), 1 / 2, "Integer", 4, "rational"),
        (catalog("tandem"), 1 / 3, "Integer", 6, "rational"),
        (catalog("gessel"), 3 / 4, "Rational(4,3)", 8, "algebraic-non-rational"),
    ],
)
def test_catalog_angles(model, theta_over_pi, rationality, order, nature):
    theta = angle(validate(model))
    assert theta == pytest.approx(theta_over_pi * math.pi, abs=1e-14)
    d = classify(theta).as_dict()
    assert d["rationality"].startswith(rationality.split("(")[0])
    if "(" in rationality:
        assert d["rationality"] == rationality
    assert d["group_order"] == order
    assert d["nature"] == nature


def test_kreweras_angle():
    # built from integer weights, normalised exactly
    total = sum(KREWERAS.p.values())
    m = WalkModel({s: v / total for s, v in KREWERAS.p.items()})
    rep = classify(angle(validate(m)))
    assert rep.theta == pytest.approx(2 * math.pi / 3)
    assert (rep.p, rep.q, rep.group_order) == (3, 2, 6)


def test_presumed_irrational():
    rep = classify(math.pi / math.sqrt(2))
    assert rep.rationality == "PresumedIrrational"
    assert rep.group_order is None
    assert rep.as_dict()["group_order"] == "infinite"
    assert rep.as_dict()["nature"] == "non-algebraic"
    assert rep.as_dict()["rationality"] == "PresumedIrrational(100)"


def test_denominator_cap_matters():
    theta = math.pi * 50 / 101
    assert classify(theta).rationality == "PresumedIrrational"
    assert classify(theta, denominator_cap=200).group_order == 202


@given(st.integers(1, 99).flatmap(lambda b: st.tuples(st.integers(1, b - 1) if b > 1 else st.just(1),
                                                      st.just(b))),
       st.floats(-1e-12, 1e-12))
def test_classify_stable_under_tiny_perturbation(ab, delta):
    a, b = ab
    if a >= b:
        return
    rep = classify(math.pi * a / b + delta)
    g = math.gcd(a, b)
    assert rep.group_order == 2 * (b // g)
    assert classify(math.pi * a / b + 1e-6 * math.pi).rationality == "PresumedIrrational"


@given(zero_drift_models)
def test_angle_in_open_interval(m):
    theta = angle(validate(m))
    assert 0 < theta < math.pi


@pytest.mark.parametrize(
    "mom",
    [Moments(0, 0, 0, 0, 1), Moments(0, 0, 1, 1, 1), Moments(0, 0, 2, 1, 1)],
)
def test_correlation_out_of_range(mom):
    with pytest.raises(CorrelationOutOfRange):
        angle(mom)


def test_homogeneity_diagnostic_exact_on_ij():
    d = homogeneity_diagnostic(ij(40))
    assert d["degree_along_1_1"] == pytest.approx(2.0, abs=1e-12)
    assert d["degree_along_2_1"] == pytest.approx(2.0, abs=1e-12)


def test_homogeneity_diagnostic_reports_non_homogeneous():
    i = np.arange(1, 41)[:, None]
    j = np.arange(1, 41)[None, :]
    d = homogeneity_diagnostic((i * j * (i + j) + i * j).astype(float))
    assert 2.0 < d["degree_along_1_1"] < 3.0
