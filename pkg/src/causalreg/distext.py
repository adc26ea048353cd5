"""Finite-part extension of x^(-k) by weighted jet subtraction, and a BPHZ toy.

The pairing of x^(-k) with a test function f is defined as

    <x^(-k), f> = integral x^(-k) [f(x) - w(x) sum_{j <= k-1} x^j f^(j)(0) / j!] dx

whose integrand is bounded at the origin.  Near 0 the integrand is evaluated
from the Taylor series of the subtracted function (closed-form derivatives)
to avoid the cancellation in f - w * jet.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quadrature import QuadratureError, integrate
from .testfn import MAX_ORDER, Smooth, TaylorWeight, jet_subtract

DEFAULT_TOL = 1e-10
SERIES_FRACTION = 1e-3


@dataclass(frozen=True)
class PowerSingularity:
    exponent: int

    def __post_init__(self):
        if self.exponent < 1:
            raise ValueError("exponent must be >= 1")

    @property
    def singular_order(self) -> int:
        return self.exponent - 1


@dataclass(frozen=True)
class PairingResult:
    value: float
    quadrature_error: float
    subtraction_order_used: int


def _domain(f: Smooth, w: TaylorWeight) -> tuple[float, float]:
    try:
        lf, hf = f.support()
    except AttributeError:
        raise ValueError("test function has no compact support") from None
    lw, hw = w.support()
    lo, hi = min(lf, lw), max(hf, hw)
    if not (np.isfinite(lo) and np.isfinite(hi)):
        raise ValueError("test function is not supported on a bounded domain")
    return lo, hi


def pair_finite_part(s: PowerSingularity, f: Smooth, w: TaylorWeight,
                     tol: float = DEFAULT_TOL) -> PairingResult:
    """Finite-part pairing <x^(-k), f> with cutoff weight w."""
    k = s.exponent
    if w.order < s.singular_order:
        raise ValueError(
            f"subtraction order {w.order} below singular order {s.singular_order} of x^-{k}")
    g = jet_subtract(f, w)
    lo, hi = _domain(f, w)
    x_series = SERIES_FRACTION * min(abs(lo), abs(hi)) if lo < 0 < hi else 0.0
    # Taylor coefficients of g / x^k about 0, valid only if g vanishes to order k-1
    series = []
    if k <= MAX_ORDER:
        coeffs = [float(g.derivative(0.0, j)) / math.factorial(j) for j in range(MAX_ORDER + 1)]
        scale = max(1.0, max(abs(c) for c in coeffs))
        if all(abs(c) <= 1e-9 * scale for c in coeffs[:k]):
            series = coeffs[k:]

    def integrand(x):
        out = g(x) / x**k
        if series and x_series > 0:
            near = np.abs(x) < x_series
            if np.any(near):
                xn = x[near]
                out[near] = sum(c * xn**p for p, c in enumerate(series))
        return out

    # the singular point is always a panel boundary
    breaks = [0.0, -x_series, x_series] if x_series else [0.0]
    try:
        res = integrate(integrand, lo, hi, breakpoints=breaks, abs_tol=tol, rel_tol=0.0,
                        max_panels=3000)
    except QuadratureError as exc:
        raise QuadratureError(f"finite-part pairing diverged (insufficient subtraction?): {exc}") from exc
    return PairingResult(float(res.value), res.error, w.order)


@dataclass(frozen=True)
class BphzRow:
    cutoff: float
    raw: float
    subtracted: float
    limit: float


def bphz_demo(mass: float, mu: float, cutoffs, tol: float = 1e-12) -> list[BphzRow]:
    """Raw vs once-subtracted I(Lambda) = int_0^Lambda k dk / (k^2 + m^2).

    The subtracted integrand k [1/(k^2+m^2) - 1/(k^2+mu^2)] is written as
    k (mu^2 - m^2) / ((k^2+m^2)(k^2+mu^2)) to avoid cancellation.
    """
    if mass <= 0 or mu <= 0:
        raise ValueError("masses must be positive")
    m2, mu2 = mass**2, mu**2
    limit = 0.5 * math.log(mu2 / m2)
    rows = []
    for cut in cutoffs:
        if cut <= 0:
            raise ValueError("cutoffs must be positive")
        # geometric breakpoints resolve the slow 1/k tail
        scale = min(mass, mu)
        breaks = [scale * 2.0**j for j in range(-4, 200) if scale * 2.0**j < cut]
        raw = integrate(lambda k: k / (k * k + m2), 0.0, cut, breakpoints=breaks,
                        abs_tol=tol, rel_tol=tol).value
        sub = integrate(lambda k: k * (mu2 - m2) / ((k * k + m2) * (k * k + mu2)), 0.0, cut,
                        breakpoints=breaks, abs_tol=tol, rel_tol=tol).value
        rows.append(BphzRow(float(cut), float(raw), float(sub), limit))
    return rows
