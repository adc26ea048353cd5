import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from causalreg.testfn import (COSINE, SHAPES, BumpProfile, CoverageGap, MomentumProfile, Product,
                              TaylorWeight, jet_subtract, momentum_scale, pou_build)


@pytest.mark.parametrize("shape", SHAPES)
def test_center_and_edge_values(shape):
    f = BumpProfile(0.7, shape, 0.2)
    assert f(0.2) == 1.0
    assert f(0.9) == 0.0 and f(-0.5) == 0.0
    assert np.all(f(np.array([1.0, 5.0, -3.0])) == 0.0)


def test_bump_half_radius_value():
    assert math.isclose(BumpProfile(2.0)(1.0), math.exp(1 - 4 / 3), rel_tol=1e-15)


def test_vector_center_is_radial():
    f = BumpProfile(1.0, "bump", (0.0, 0.0))
    assert math.isclose(f(np.array([0.3, 0.4])), BumpProfile(1.0)(0.5), rel_tol=1e-15)


@pytest.mark.parametrize("shape", SHAPES)
@pytest.mark.parametrize("k", range(0, 4))
def test_derivatives_match_finite_differences(shape, k):
    f = BumpProfile(1.3, shape)
    x = np.linspace(-1.2, 1.2, 41)
    h = 1e-5
    fd = (f.derivative(x + h, k) - f.derivative(x - h, k)) / (2 * h)
    exact = f.derivative(x, k + 1)
    scale = max(1.0, np.max(np.abs(exact)))
    assert np.max(np.abs(fd - exact)) < 1e-6 * scale


def test_bump_first_derivative_at_half_radius():
    f = BumpProfile(1.0)
    h = 1e-6
    fd = (f(0.5 + h) - f(0.5 - h)) / (2 * h)
    assert abs(fd - f.derivative(0.5, 1)) < 1e-7


@pytest.mark.parametrize("shape", SHAPES)
def test_even_and_flat_regions(shape):
    f = BumpProfile(1.0, shape)
    assert f.derivative(0.0, 1) == 0.0
    if shape == "flattop":
        x = np.linspace(-0.5, 0.5, 11)
        for k in range(1, 5):
            assert np.all(f.derivative(x, k) == 0.0)


@pytest.mark.parametrize("shape", SHAPES)
@pytest.mark.parametrize("k", range(0, 5))
def test_smooth_at_support_boundary(shape, k):
    f = BumpProfile(1.0, shape)
    inside = f.derivative(1.0 - 1e-3, k)
    assert abs(inside) < 1e-8
    assert f.derivative(1.0, k) == 0.0


def test_unsupported_order():
    with pytest.raises(ValueError):
        BumpProfile(1.0).derivative(0.1, 5)


def test_invalid_profiles():
    with pytest.raises(ValueError):
        BumpProfile(0.0)
    with pytest.raises(ValueError):
        BumpProfile(1.0, "gaussian")


@settings(max_examples=40, deadline=None)
@given(st.floats(0.01, 5.0), st.floats(-1.0, 1.0), st.floats(0.2, 2.0))
def test_partition_of_unity_sums_to_one(spacing, a, length):
    pou = pou_build((a, a + length), spacing)
    x = np.random.default_rng(0).uniform(a, a + length, 1000)
    assert np.max(np.abs(pou(x) - 1)) < 1e-12


def test_partition_of_unity_overlap_members_in_unit_interval():
    pou = pou_build((0.0, 1.0), 0.5)
    w = pou.weights(0.25)[:, 0]
    inside = w[w > 0]
    assert len(inside) == 2 and np.all(inside < 1)
    assert math.isclose(inside.sum(), 1.0, rel_tol=1e-15)


def test_partition_of_unity_coverage_gap():
    with pytest.raises(CoverageGap):
        pou_build((0.0, 3.0), 1.0, radius=0.4)


def test_momentum_profile():
    p = MomentumProfile(BumpProfile(1.0, "flattop"), 2.0)
    assert momentum_scale(p, 0.0) == 1.0 and p(0.0) ** 2 == 1.0
    assert p(4.0 * 1.01) == 0.0
    q = MomentumProfile(BumpProfile(1.0, "flattop"), 4.0)
    assert q(3.1) == p(3.1 / 4)
    with pytest.raises(ValueError):
        p(-1.0)


def test_taylor_weight_validation():
    with pytest.raises(ValueError):
        TaylorWeight(BumpProfile(1.0, "bump", 0.2), 0)
    with pytest.raises(ValueError):
        TaylorWeight(BumpProfile(1.0, "bump"), 2)
    TaylorWeight(BumpProfile(1.0, "flattop"), 4)


def test_jet_subtract_order_zero():
    g = jet_subtract(BumpProfile(1.0, "bump", 0.3), TaylorWeight(BumpProfile(1.0), 0))
    assert g(0.0) == 0.0


def test_jet_of_flat_function_is_zero():
    f = BumpProfile(0.3, "bump", 0.6)
    g = jet_subtract(f, TaylorWeight(BumpProfile(1.0, "flattop"), 2))
    x = np.linspace(-1, 1.5, 101)
    assert np.max(np.abs(g(x) - f(x))) < 1e-12


def test_jet_subtract_vanishes_to_order():
    f = Product(COSINE, BumpProfile(1.0))
    g = jet_subtract(f, TaylorWeight(BumpProfile(1.0), 1))
    x = np.array([1e-2, 1e-3, 1e-4, 1e-5, 1e-6])
    ratio = np.abs(g(x)) / x**2
    assert np.all(ratio < 2.0)
    for k in range(2):
        assert abs(g.derivative(0.0, k)) < 1e-9


@pytest.mark.parametrize("order", range(0, 5))
def test_jet_subtract_derivatives_vanish(order):
    f = BumpProfile(1.4, "bump", 0.35)
    g = jet_subtract(f, TaylorWeight(BumpProfile(0.8, "flattop"), order))
    for k in range(order + 1):
        assert abs(g.derivative(0.0, k)) < 1e-9
