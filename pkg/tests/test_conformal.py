import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quadrant_harmonic.conformal import (
    build_w,
    build_w_model,
    build_w_tilde,
    eval_T,
    eval_u,
    eval_u_literal,
    growth_constant,
    growth_exponent,
    raw_hyperbolic,
    raw_sine,
    taylor_coefficients,
    x_from_u,
)
from quadrant_harmonic.errors import PoleAtOne
from quadrant_harmonic.kernel import boundary_curve, branches_X, build_kernel, in_domain
from quadrant_harmonic.walk_model import catalog, transpose

from .conftest import CATALOG_NAMES

NON_DEGENERATE = ["srw", "tandem", "gessel"]


@pytest.fixture(scope="module")
def maps():
    return {n: build_w_model(catalog(n)) for n in CATALOG_NAMES}


@pytest.mark.parametrize("name, case", [("srw", "finite"), ("gessel", "finite"),
                                        ("tandem", "infinite"), ("diagonal", "degenerate")])
def test_case_detection(maps, name, case):
    assert maps[name].case == case


@pytest.mark.parametrize("name", NON_DEGENERATE)
def test_u_normalisation(maps, name):
    cm = maps[name]
    assert complex(eval_u(cm, cm.x1)) == pytest.approx(1, abs=1e-14)
    assert complex(eval_u(cm, 1.0)) == 0
    assert complex(eval_u_literal(cm, cm.x1)) == pytest.approx(1, abs=1e-14)
    if cm.case == "finite":
        assert abs(complex(eval_u(cm, cm.x4 * (1 + 1e-12)))) > 1e9


@pytest.mark.parametrize("name", NON_DEGENERATE)
@given(st.floats(-2, 2), st.floats(-2, 2))
def test_factored_u_equals_literal(maps, name, re, im):
    cm = maps[name]
    x = complex(re, im)
    if abs(x - 1) < 1e-2 or (cm.case == "finite" and abs(x - cm.x4) < 1e-2):
        return
    a, b = complex(eval_u(cm, x)), complex(eval_u_literal(cm, x))
    assert abs(a - b) <= 1e-12 * (1 + abs(a)) / abs(x - 1)


@pytest.mark.parametrize("name", NON_DEGENERATE)
def test_x_from_u_inverts_u(maps, name):
    cm = maps[name]
    xs = np.array([0.1, -0.5 + 0.3j, 0.9 - 0.2j])
    np.testing.assert_allclose(x_from_u(cm, eval_u_literal(cm, xs)), xs, rtol=1e-12)


@pytest.mark.parametrize("k", [2.0, 3.0, 4 / 3, 1.5, math.pi / 1.1])
@given(st.floats(0.9, 1.1), st.floats(-math.pi, math.pi))
def test_sine_and_hyperbolic_forms_agree_near_seam(k, r, phi):
    T = r * np.exp(1j * phi)
    if abs(T.imag) < 1e-6 and abs(T.real) > 1:
        return  # branch cut of arcsin
    if abs(T.imag) < 1e-6 and abs(T.real) < 1 and T.real < 0:
        return  # sign of the cut in sqrt(T^2 - 1)
    a, b = complex(raw_sine(T, k)), complex(raw_hyperbolic(T, k))
    assert abs(a - b) <= 1e-9 * (1 + abs(a))


@pytest.mark.parametrize("name", NON_DEGENERATE)
def test_forms_agree_on_domain_samples(maps, name):
    cm = maps[name]
    xs = np.linspace(-0.9, 0.99, 50) + 0.1j
    T = eval_T(cm, xs)
    np.testing.assert_allclose(raw_sine(T, cm.k), raw_hyperbolic(T, cm.k), rtol=1e-10, atol=1e-10)


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_w_vanishes_at_origin_and_blows_up_at_one(maps, name):
    cm = maps[name]
    assert abs(cm(0.0)) < 1e-14
    vals = np.real(cm(1 - np.logspace(-1, -6, 6)))
    assert np.all(np.diff(vals) > 0) and vals[-1] > 1e7
    with pytest.raises(PoleAtOne):
        cm(1.0)


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_w_real_on_real_segment(maps, name):
    cm = maps[name]
    xs = np.linspace(cm.x1 + 1e-3, 0.999, 40)
    w = cm(xs)
    assert np.max(np.abs(w.imag) / np.maximum(1, np.abs(w))) < 1e-10


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_w_glues_boundary(maps, name):
    cm = maps[name]
    kd = cm.kd
    ys = kd.y1 + (1 - kd.y1) * np.linspace(0.02, 0.98, 49)
    x0, x1 = branches_X(kd, ys)
    a, b = cm(x0), cm(x1)
    assert np.max(np.abs(a - b) / np.maximum(1, np.abs(a))) < 1e-9
    assert np.max(np.abs(a.imag) / np.maximum(1, np.abs(a))) < 1e-9


@pytest.mark.parametrize("name, c", [("srw", 2.0), ("diagonal", 4.0), ("tandem", 6.75), ("gessel", 1.0)])
def test_growth_constant_closed_form_and_limit(maps, name, c):
    cm = maps[name]
    assert cm.growth_constant_c == pytest.approx(c, rel=1e-13)
    est, err = growth_constant(cm)
    assert est == pytest.approx(c, rel=1e-8)
    assert err < 1e-8 * c


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_growth_exponent(maps, name):
    cm = maps[name]
    assert growth_exponent(cm) == pytest.approx(cm.k, abs=1e-5)


def test_tandem_taylor_coefficients(maps):
    a = taylor_coefficients(maps["tandem"], 4)
    np.testing.assert_allclose(a.real, [0, 0, 6.75, 20.25], atol=1e-10)


def test_srw_w_closed_form(maps):
    # for the simple walk w is a rational function with a double pole at 1
    cm = maps["srw"]
    xs = np.array([0.2, -0.4 + 0.3j, 0.7j])
    np.testing.assert_allclose(cm(xs), 2 * xs / (1 - xs) ** 2, rtol=1e-12)


def test_scale_and_rescale(maps):
    cm = maps["gessel"]
    kd = cm.kd
    cm3 = build_w(kd, cm.theta, scale=3.0)
    np.testing.assert_allclose(cm3(0.3 + 0.1j), 3 * cm(0.3 + 0.1j), rtol=1e-14)
    assert cm.rescaled(3.0).growth_constant_c == pytest.approx(3 * cm.growth_constant_c)


@pytest.mark.parametrize("name", NON_DEGENERATE)
def test_w_tilde_is_map_of_transposed_walk(maps, name):
    m = catalog(name)
    wt = build_w_tilde(m, maps[name])
    direct = build_w_model(transpose(m))
    xs = np.array([0.1, 0.3 + 0.2j])
    ratio = wt(xs) / direct(xs)
    np.testing.assert_allclose(ratio, ratio[0], rtol=1e-12)
    assert ratio[0].real > 0


@pytest.mark.parametrize("name", ["srw", "gessel"])
def test_injective_on_disk_by_argument_principle(maps, name):
    cm = maps[name]
    kd = build_kernel(catalog(name))
    r = 0.9 * kd.x1
    z = r * np.exp(2j * np.pi * np.arange(2048) / 2048)
    assert np.all(in_domain(kd, z))
    wz = cm(z)
    rng = np.random.default_rng(0)
    for z0 in 0.8 * r * np.sqrt(rng.random(10)) * np.exp(2j * np.pi * rng.random(10)):
        d = wz - cm(z0)
        winding = np.sum(np.angle(np.roll(d, -1) / d)) / (2 * np.pi)
        assert round(winding) == 1


def test_boundary_lies_outside_open_domain():
    kd = build_kernel(catalog("srw"))
    pts = boundary_curve(kd, 200)
    assert not np.any(in_domain(kd, 1.05 * pts[np.abs(pts) > 1]))
