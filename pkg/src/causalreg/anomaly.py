"""Test-function regulated abelian anomaly (Euclidean).

The regulator is f(u) = rho~^2(u), u = y^2, with f(0) = 1 and compact support.
The Jacobian density reduces to a radial integral times a gamma trace:

    D=4:  B = (e^2 / 8) tr[g5 (sigma.F)^2]  int d^4y/(2pi)^4 f''(y^2)
    D=2:  B = (e / 2)   tr[g5 sigma.F]      int d^2y/(2pi)^2 f'(y^2)

(the n-th order term of f(-Dslash^2) carries (e/2)^n / n!).  Both radial
integrals are total derivatives, so they depend on the profile only through
f(0) = 1.

Field-strength labels 0..D-1 are Euclidean axes; axis mu uses the matrix
``clifford.euclidean_gamma(sig, mu + 1)`` (gamma_E^j = -i gamma^j for spatial j,
gamma_E^D = gamma^0), gamma_5 is the Minkowski one from :mod:`clifford`, and
eps_{01..D-1} = +1.  With these conventions tr[g5 sigma_01 sigma_23] = +4, so
the assembled D=4 coefficient is +e^2/16pi^2.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import clifford
from .quadrature import integrate
from .testfn import BumpProfile, MomentumProfile


@dataclass(frozen=True)
class FieldStrength:
    dim: int
    F: np.ndarray

    def __post_init__(self):
        F = np.asarray(self.F, dtype=float)
        if F.shape != (self.dim, self.dim):
            raise ValueError(f"F must be {self.dim}x{self.dim}")
        if np.any(F != -F.T):
            raise ValueError("F must be antisymmetric")
        object.__setattr__(self, "F", F)

    @classmethod
    def from_components(cls, dim: int, comps: dict[tuple[int, int], float]) -> FieldStrength:
        """Build F from {(mu, nu): value}, labels 0..dim-1."""
        F = np.zeros((dim, dim))
        for (mu, nu), v in comps.items():
            if not (0 <= mu < dim and 0 <= nu < dim) or mu == nu:
                raise ValueError(f"bad index pair {(mu, nu)}")
            F[mu, nu] = v
            F[nu, mu] = -v
        return cls(dim, F)


@dataclass(frozen=True)
class RegulatorProfile:
    """f(u) = rho~(u)^2 with derivatives; zero for u >= support_end."""

    momentum: MomentumProfile

    def __post_init__(self):
        if self.value(0.0) != 1.0:
            raise ValueError("regulator must satisfy f(0) = 1")
        end = self.support_end
        if self.value(end) != 0.0 or self.derivative(end, 1) != 0.0:
            raise ValueError("regulator has nonvanishing boundary terms")

    @classmethod
    def of(cls, shape: str = "bump", scale: float = 1.0, width: float = 1.0) -> RegulatorProfile:
        return cls(MomentumProfile(BumpProfile(width, shape), scale))

    @property
    def support_end(self) -> float:
        return self.momentum.support_end

    def value(self, u):
        return self.momentum(u) ** 2

    def derivative(self, u, k: int):
        g = [self.momentum.derivative(u, j) for j in range(k + 1)]
        return sum(math.comb(k, j) * g[j] * g[k - j] for j in range(k + 1))


@dataclass(frozen=True)
class CustomRegulator:
    """Regulator from explicit callables (for profiles outside the catalogue)."""

    f: Callable
    df: Callable
    d2f: Callable
    support_end: float

    def __post_init__(self):
        if self.f(0.0) != 1.0:
            raise ValueError("regulator must satisfy f(0) = 1")
        if abs(self.f(self.support_end)) > 0 or abs(self.df(self.support_end)) > 0:
            raise ValueError("regulator has nonvanishing boundary terms")

    def value(self, u):
        return self.f(u)

    def derivative(self, u, k: int):
        return {0: self.f, 1: self.df, 2: self.d2f}[k](u)


def _radial(fn, end: float, tol: float) -> float:
    # quarter points include the flat-top edge
    return float(integrate(fn, 0.0, end, breakpoints=[0.25 * end, 0.5 * end, 0.75 * end],
                           abs_tol=tol, rel_tol=tol).value)


def radial_integral_4d(r, tol: float = 1e-11) -> float:
    """int d^4y/(2pi)^4 f''(y^2) = (pi^2/(2pi)^4) int_0^inf u f''(u) du."""
    val = _radial(lambda u: u * r.derivative(u, 2), r.support_end, tol)
    return math.pi**2 / (2 * math.pi) ** 4 * val


def radial_integral_2d(r, tol: float = 1e-11) -> float:
    """int d^2y/(2pi)^2 f'(y^2) = (pi/(2pi)^2) int_0^inf f'(u) du."""
    val = _radial(lambda u: r.derivative(u, 1), r.support_end, tol)
    return math.pi / (2 * math.pi) ** 2 * val


def euclidean_epsilon(dim: int) -> np.ndarray:
    eps = np.zeros((dim,) * dim)
    for p in itertools.permutations(range(dim)):
        eps[p] = clifford._perm_sign(p)
    return eps


def _euclid(dim: int, rep: str | None):
    sig = clifford.MetricSignature.minkowski(dim)
    g5 = clifford.gamma5(sig, rep)
    sig_mat = [[clifford.euclidean_sigma(sig, m + 1, n + 1, rep) for n in range(dim)]
               for m in range(dim)]
    return g5, sig_mat


def dual_contraction(F: FieldStrength) -> float:
    """*F.F = (1/2) eps_{mnrs} F_mn F_rs by explicit epsilon contraction."""
    eps = euclidean_epsilon(4)
    return 0.5 * float(np.einsum("abcd,ab,cd->", eps, F.F, F.F))


def sigma_dot_f(F: FieldStrength, rep: str | None = None) -> np.ndarray:
    _, sig_mat = _euclid(F.dim, rep)
    return sum(sig_mat[m][n] * F.F[m, n] for m in range(F.dim) for n in range(F.dim))


@functools.cache
def trace_constant_4d(rep: str | None = None) -> float:
    """kappa in tr[g5 sigma_mn sigma_rs] = kappa eps_mnrs, so trace = 2 kappa *F.F."""
    g5, s = _euclid(4, rep)
    eps = euclidean_epsilon(4)
    t = np.array([[[[clifford.trace_product([g5, s[a][b], s[c][d]]) for d in range(4)]
                    for c in range(4)] for b in range(4)] for a in range(4)])
    kappa = t[0, 1, 2, 3]
    if np.max(np.abs(t - kappa * eps)) > 1e-13 or kappa.imag != 0:
        raise ArithmeticError("tr[g5 sigma sigma] is not proportional to eps")
    return float(kappa.real)


def trace_factor_4d(F: FieldStrength, rep: str | None = None) -> float:
    """tr[g5 (sigma_{mn} F_mn)^2], checked against 2 kappa *F.F."""
    if F.dim != 4:
        raise ValueError("trace_factor_4d needs a 4x4 field strength")
    g5, _ = _euclid(4, rep)
    sf = sigma_dot_f(F, rep)
    t = clifford.trace_product([g5, sf, sf])
    expected = 2 * trace_constant_4d(rep) * dual_contraction(F)
    scale = max(1.0, float(np.sum(F.F**2)))
    if abs(t.imag) > 1e-12 * scale or abs(t.real - expected) > 1e-12 * scale:
        raise ArithmeticError(f"trace {t} departs from 2 kappa *F.F = {expected}")
    return t.real


def trace_factor_2d(F: FieldStrength, rep: str | None = None) -> float:
    """tr[g5 sigma_{mn} F_mn] in D=2."""
    if F.dim != 2:
        raise ValueError("trace_factor_2d needs a 2x2 field strength")
    g5, _ = _euclid(2, rep)
    t = clifford.trace_product([g5, sigma_dot_f(F, rep)])
    return t.real


@dataclass(frozen=True)
class AnomalyResult:
    radial_integral: float
    trace_factor: float
    density: float
    coefficient: float


def anomaly_density(F: FieldStrength, e: float, r=None, rep: str | None = None) -> AnomalyResult:
    """Regulated Jacobian density B.

    ``coefficient`` is B / (e^2 *F.F) in D=4 and B / (e eps_mn F_mn) in D=2;
    it is measured from a unit reference field, so it is available even when
    the given F has a vanishing invariant.
    """
    r = RegulatorProfile.of() if r is None else r
    if F.dim == 4:
        radial = radial_integral_4d(r)
        trace = trace_factor_4d(F, rep)
        density = e * e / 8 * trace * radial
        coef = 2 * trace_constant_4d(rep) / 8 * radial
    elif F.dim == 2:
        radial = radial_integral_2d(r)
        trace = trace_factor_2d(F, rep)
        density = e / 2 * trace * radial
        ref = FieldStrength.from_components(2, {(0, 1): 1.0})
        coef = trace_factor_2d(ref, rep) / 2 * radial / 2.0
    else:
        raise ValueError("dimension must be 2 or 4")
    return AnomalyResult(radial, trace, density, coef)
