import math

import numpy as np
import pytest

from causalreg.distext import PowerSingularity, bphz_demo, pair_finite_part
from causalreg.quadrature import QuadratureError, composite_gauss_legendre, integrate
from causalreg.testfn import BumpProfile, Scaled, TaylorWeight, jet_subtract

W0 = TaylorWeight(BumpProfile(1.0), 0)
W1 = TaylorWeight(BumpProfile(1.0), 1)


class Sum:
    def __init__(self, a, b, c=1.0):
        self.a, self.b, self.c = a, b, c

    def __call__(self, x):
        return self.a(x) + self.c * self.b(x)

    def derivative(self, x, k):
        return self.a.derivative(x, k) + self.c * self.b.derivative(x, k)

    def support(self):
        (la, ha), (lb, hb) = self.a.support(), self.b.support()
        return min(la, lb), max(ha, hb)


def test_singular_order():
    assert PowerSingularity(3).singular_order == 2
    with pytest.raises(ValueError):
        PowerSingularity(0)


def test_insufficient_order_rejected():
    with pytest.raises(ValueError):
        pair_finite_part(PowerSingularity(3), BumpProfile(1.0), W1)


def test_function_vanishing_near_zero_needs_no_subtraction():
    f = Sum(BumpProfile(0.4, "bump", 1.0), BumpProfile(0.4, "bump", -1.0))
    direct = integrate(lambda x: f(x) / x**2, -1.4, 1.4, breakpoints=[-0.6, 0.0, 0.6]).value
    r = pair_finite_part(PowerSingularity(2), f, W1)
    assert abs(r.value - direct) < 1e-9


def test_principal_value_of_even_function_vanishes():
    r = pair_finite_part(PowerSingularity(1), BumpProfile(1.0), W0)
    assert abs(r.value) < 1e-12


def test_k2_bump_matches_composite_oracle():
    f = BumpProfile(1.0)
    r = pair_finite_part(PowerSingularity(2), f, W1)
    g = jet_subtract(f, W1)
    oracle = composite_gauss_legendre(lambda x: g(x) / x**2, -1, 1, 4000, breakpoints=[0.0])
    assert abs(r.value - oracle) < 1e-7
    assert r.quadrature_error < 1e-10
    assert r.subtraction_order_used == 1


def test_weight_change_is_a_local_term():
    f = BumpProfile(1.2, "flattop", 0.3)
    w1 = TaylorWeight(BumpProfile(1.0), 1)
    w2 = TaylorWeight(BumpProfile(1.5, "flattop"), 1)
    s = PowerSingularity(2)
    diff = pair_finite_part(s, f, w1).value - pair_finite_part(s, f, w2).value
    f0, f1 = f(0.0), f.derivative(0.0, 1)
    local = integrate(lambda x: (w2(x) - w1(x)) * (f0 + x * f1) / x**2, -1.5, 1.5,
                      breakpoints=[0.0, -0.75, 0.75], abs_tol=1e-12, rel_tol=0).value
    assert abs(diff - local) < 1e-7


def test_linear_in_test_function(rng):
    s = PowerSingularity(2)
    for _ in range(3):
        a = BumpProfile(rng.uniform(0.5, 1.5), "bump", rng.uniform(-0.3, 0.3))
        b = BumpProfile(rng.uniform(0.5, 1.5), "flattop", rng.uniform(-0.3, 0.3))
        c = rng.uniform(-2, 2)
        lhs = pair_finite_part(s, Sum(a, b, c), W1).value
        rhs = pair_finite_part(s, a, W1).value + c * pair_finite_part(s, b, W1).value
        assert abs(lhs - rhs) < 1e-9


def test_weight_independent_when_jet_vanishes():
    f = BumpProfile(0.3, "bump", 0.7)
    s = PowerSingularity(2)
    a = pair_finite_part(s, f, W1).value
    b = pair_finite_part(s, f, TaylorWeight(BumpProfile(2.0, "flattop"), 3)).value
    assert abs(a - b) < 1e-9


def test_randomized_against_oracle(rng):
    for _ in range(4):
        f = Scaled(BumpProfile(rng.uniform(0.5, 2), "flattop", rng.uniform(-0.4, 0.4)),
                   rng.uniform(0.5, 2))
        for k in (1, 2):
            w = TaylorWeight(BumpProfile(rng.uniform(0.5, 1.5)), k - 1)
            g = jet_subtract(f, w)
            lo, hi = g.support()
            oracle = composite_gauss_legendre(lambda x: g(x) / x**k, lo, hi, 4000,
                                              breakpoints=[0.0])
            assert abs(pair_finite_part(PowerSingularity(k), f, w).value - oracle) < 1e-7


class HalfWeight:
    """Duck-typed weight with w(0) = 1/2, bypassing TaylorWeight validation."""

    order = 1

    def __init__(self):
        self.w = BumpProfile(1.0)

    def __call__(self, x):
        return 0.5 * self.w(x)

    def derivative(self, x, k):
        return 0.5 * self.w.derivative(x, k)

    def support(self):
        return self.w.support()


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_divergence_is_reported():
    with pytest.raises(QuadratureError, match="insufficient subtraction"):
        pair_finite_part(PowerSingularity(2), BumpProfile(1.0), HalfWeight())


def test_bphz_equal_masses_vanish():
    for row in bphz_demo(1.5, 1.5, [10.0, 1e4]):
        assert row.subtracted == 0.0


def test_bphz_limits():
    rows = bphz_demo(1.0, 2.0, [1e2, 1e4, 1e6])
    assert abs(rows[-1].subtracted - math.log(4) / 2) < 1e-6
    r2 = bphz_demo(1.0, 2.0, [2e6])[0]
    assert abs(r2.raw - rows[-1].raw - math.log(2)) < 1e-6
    assert rows[0].raw < rows[1].raw < rows[2].raw
    with pytest.raises(ValueError):
        bphz_demo(0.0, 1.0, [10.0])
