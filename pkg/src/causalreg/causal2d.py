"""Causal vacuum polarization of massive QED in two dimensions.

Metric (+, -).  For timelike k above threshold the causal density is

    d(k) = (4 m^2 / k^4) (1 - 4 m^2 / k^2)^(-1/2) sign(k0),

and the retarded part follows from the once-subtracted splitting integral

    r(k) = (i / 2 pi) int dt d(t k) (t k)^2 / ((t - i0)(1 - t + i0)).

With a = 4 m^2 / k^2 and beta = sqrt(1 - a) its closed form is

    r(k) = (i / pi) [1 + (a / 2beta) (log((1 + beta) / (1 - beta)) - i pi)]      (k0 > 0)

The -i pi follows from the +i0 in (1 - t + i0); it makes Re r = k^2 d(k) / 2.
As m -> 0, r -> i / pi and Pi_{mu nu} = i (e^2 / pi)(g - k k / k^2): a boson of
mass^2 e^2 / pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import clifford
from .quadrature import QuadratureError, integrate

METRIC = clifford.MetricSignature.minkowski(2).g


@dataclass(frozen=True)
class Momentum2:
    k0: float
    k1: float

    @property
    def ksq(self) -> float:
        return self.k0 * self.k0 - self.k1 * self.k1

    @property
    def sign(self) -> int:
        if self.k0 == 0:
            raise ValueError("sign(k0) undefined for k0 = 0")
        return 1 if self.k0 > 0 else -1

    @property
    def upper(self) -> np.ndarray:
        return np.array([self.k0, self.k1])

    @property
    def lower(self) -> np.ndarray:
        return METRIC @ self.upper

    def __neg__(self) -> Momentum2:
        return Momentum2(-self.k0, -self.k1)


@dataclass(frozen=True)
class ModelParams:
    m: float = 0.0
    e: float = 1.0

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("mass must be nonnegative")
        if self.e <= 0:
            raise ValueError("coupling must be positive")


@dataclass(frozen=True)
class DispersionResult:
    value: complex
    quadrature_error: float
    pv_split: dict = field(default_factory=dict)


@dataclass(frozen=True)
class PolarizationTensor:
    components: np.ndarray
    k: Momentum2
    params: ModelParams
    rhat: complex
    longitudinal_defect: float


def transverse_projector(k: Momentum2) -> np.ndarray:
    """g_{mu nu} - k_mu k_nu / k^2 (lower indices)."""
    if k.ksq == 0:
        raise ValueError("lightlike momentum: projector undefined")
    kl = k.lower
    return METRIC - np.outer(kl, kl) / k.ksq


def dhat(k: Momentum2, m: float) -> float:
    ksq = k.ksq
    thr = 4 * m * m
    if ksq == thr:
        raise ValueError("k^2 = 4 m^2 is the threshold; d(k) is not evaluated there")
    if ksq < thr or m == 0:
        return 0.0
    a = thr / ksq
    return k.sign * (thr / ksq**2) / math.sqrt(1 - a)


def _check_above(ksq: float, msq: float):
    if msq < 0:
        raise ValueError("m^2 must be nonnegative")
    if not ksq > 4 * msq:
        raise ValueError(f"below threshold: k^2 = {ksq} <= 4 m^2 = {4 * msq}")


def rhat_analytic(ksq: float, msq: float, k0_sign: int = 1) -> complex:
    """Closed form of r(k), continued off the physical region.

    For k^2 > 4m^2 the absorptive branch is -i pi sign(k0) (retarded boundary
    value); for k^2 < 4m^2 (spacelike or below threshold) r is purely
    imaginary and r(0) = 0 is the subtraction point.
    """
    if msq < 0:
        raise ValueError("m^2 must be nonnegative")
    if msq == 0:
        if ksq == 0:
            raise ValueError("r undefined at k^2 = 0 for m = 0")
        return 1j / math.pi
    if ksq == 0:
        return 0j
    a = 4 * msq / ksq
    if a == 1:
        raise ValueError("threshold k^2 = 4 m^2")
    if 0 < a < 1:
        beta = math.sqrt(1 - a)
        # log((1+beta)/(1-beta)) with 1 - beta = a / (1 + beta) to avoid cancellation
        log_term = math.log((1 + beta) ** 2 / a) - 1j * math.pi * k0_sign
        h = log_term / beta
    elif a < 0:
        beta = math.sqrt(1 - a)
        h = 2 * math.atanh(1 / beta) / beta
    else:
        b = math.sqrt(a - 1)
        h = -2 * math.atan(1 / b) / b
    return 1j / math.pi * (1 + 0.5 * a * h)


def rhat_closed(ksq: float, msq: float) -> complex:
    """r(k) on the physical sheet k^2 > 4m^2, k0 > 0."""
    _check_above(ksq, msq)
    return rhat_analytic(ksq, msq, 1)


def rhat_quadrature(ksq: float, msq: float, tol: float = 1e-13) -> DispersionResult:
    """Evaluate the subtracted splitting integral by quadrature (k0 > 0).

    The support |t| >= t0 = 2m/sqrt(k^2) is mapped by t = +-t0 cosh(u), which
    absorbs the inverse square root at t0; the t = 1 pole is split into a
    principal value (folded symmetrically about the pole) and -i pi times the
    residue.  The t = 0 pole lies outside the support.
    """
    _check_above(ksq, msq)
    if msq == 0:
        raise ValueError("m = 0: the density is a delta function; use rhat_closed")
    a = 4 * msq / ksq
    t0 = math.sqrt(a)
    u1 = math.acosh(1 / t0)
    u_max = u1 + 40.0

    def sech2(u):
        return 1 / np.cosh(u) ** 2

    # t < 0 branch: d(t k)(t k)^2 dt / (t (1 - t)) = du / (cosh^2 u (1 + t0 cosh u))
    neg = integrate(lambda u: sech2(u) / (1 + t0 * np.cosh(u)), 0.0, u_max,
                    abs_tol=tol, rel_tol=tol)

    # t > 0 branch: du / (cosh^2 u (1 - t0 cosh u)), 1 - t0 cosh u = -2 t0 sinh((u+u1)/2) sinh((u-u1)/2)
    def phi(u):
        return sech2(u) / np.sinh(0.5 * (u + u1))

    def folded(s):
        return (phi(u1 - s) - phi(u1 + s)) / (2 * t0 * np.sinh(0.5 * s))

    def tail(u):
        return -phi(u) / (2 * t0 * np.sinh(0.5 * (u - u1)))

    near = integrate(folded, 0.0, u1, abs_tol=tol, rel_tol=tol)
    far = integrate(tail, 2 * u1, u_max, breakpoints=[2 * u1 + 1.0], abs_tol=tol, rel_tol=tol)
    J = math.fsum([neg.value, near.value, far.value])
    err = neg.error + near.error + far.error
    pv = 1j * J / (2 * math.pi)
    pole = 0.5 * a / math.sqrt(1 - a)
    return DispersionResult(pv + pole, err / (2 * math.pi),
                            {"principal_value": pv, "pole": pole})


def massless_limit(ksq: float = 1.0, ratios=None) -> tuple[complex, float]:
    """Extrapolate r to m^2/k^2 -> 0 by least squares on the small-mass expansion.

    r(x) = r0 + c1 x log x + c2 x + c3 x^2 log x + c4 x^2 + ...,  x = m^2 / k^2.
    Returns (r0, rms residual of the fit).
    """
    x = np.geomspace(1e-4, 1e-2, 9) if ratios is None else np.asarray(ratios, dtype=float)
    r = np.array([rhat_closed(ksq, xi * ksq) for xi in x])
    basis = np.column_stack([np.ones_like(x), x * np.log(x), x, x**2 * np.log(x), x**2])
    basis = basis[:, : min(5, len(x) - 1)]
    coef, *_ = np.linalg.lstsq(basis.astype(complex), r, rcond=None)
    resid = r - basis @ coef
    return complex(coef[0]), float(np.sqrt(np.mean(np.abs(resid) ** 2)))


def boson_mass_squared(e: float = 1.0, ksq: float = 1.0) -> float:
    """Pi = i M^2 (g - k k / k^2) in the massless limit; returns M^2."""
    r0, _ = massless_limit(ksq)
    return float((e * e * r0 / 1j).real)


def polarization(k: Momentum2, p: ModelParams) -> PolarizationTensor:
    """Pi_{mu nu}(k) = e^2 (g - k k / k^2) r(k) (lower indices)."""
    if k.ksq == 0:
        raise ValueError("lightlike momentum")
    sign = k.sign if k.ksq > 0 else 1
    r = rhat_analytic(k.ksq, p.m * p.m, sign)
    pi = p.e**2 * transverse_projector(k) * r
    contraction = k.upper @ pi
    norm = np.linalg.norm(pi)
    defect = float(np.linalg.norm(contraction) / (np.linalg.norm(k.upper) * norm)) if norm else 0.0
    return PolarizationTensor(pi, k, p, r, defect)


# ---------------------------------------------------------------------------
# brute-force oracle for the p-integral


def _gauss(x, width):
    return np.exp(-0.5 * (x / width) ** 2) / (math.sqrt(2 * math.pi) * width)


def _phat_rest(kappa: float, m: float, width: float, tol: float) -> np.ndarray:
    """Rest-frame (k = (kappa, 0)) smeared integral, components (00, 01, 11)."""
    m2 = m * m
    w_p0 = width / (2 * kappa)
    reach = 12.0
    lo = max(0.0, 0.5 * kappa - reach * w_p0)
    hi = min(kappa, 0.5 * kappa + reach * w_p0)

    def inner(p0: float) -> np.ndarray:
        c = p0 * p0 - m2
        top = c + reach * width
        if top <= 0:
            return np.zeros(3)
        pmax = math.sqrt(top)
        breaks = [0.0]
        if c > 0:
            ridge = math.sqrt(c)
            half = width / (2 * ridge)
            for j in (-6, -3, -1, 0, 1, 3, 6):
                for sgn in (1, -1):
                    breaks.append(sgn * (ridge + j * half))

        def f(p1):
            g = _gauss(c - p1 * p1, width)
            # lower-index p = (p0, -p1), k = (kappa, 0)
            t00 = 2 * p0 * kappa - 2 * p0 * p0 - 0.5 * kappa**2
            t01 = -p1 * kappa + 2 * p0 * p1
            t11 = -2 * p1 * p1 + 0.5 * kappa**2
            return g * np.array([np.full_like(p1, t00), t01, t11])

        return integrate(f, -pmax, pmax, breakpoints=breaks, abs_tol=1e-14, rel_tol=tol).value

    def outer(p0s):
        cols = np.array([inner(p0) for p0 in p0s]).T
        return cols * _gauss(kappa**2 - 2 * kappa * p0s, width)

    breaks = [0.5 * kappa + j * w_p0 for j in (-8, -4, -2, -1, 0, 1, 2, 4, 8)]
    res = integrate(outer, lo, hi, breakpoints=breaks, abs_tol=1e-14, rel_tol=tol)
    return -2.0 * res.value


def phat_oracle(k: Momentum2, m: float, delta_width: float, tol: float = 1e-11) -> np.ndarray:
    """P_{mu nu}(k) with both delta functions replaced by normalized Gaussians.

    The Gaussians have width ``delta_width * k^2`` in their (mass^2) arguments.
    The double integral over p is done by nested adaptive quadrature in the
    rest frame of k; the tensor is then boosted back.  Theta(p0) Theta(k0 - p0)
    is implemented by the p0 integration window.
    """
    if k.ksq <= 0:
        raise ValueError("oracle needs timelike k")
    if k.k0 <= 0:
        # Theta(p0) Theta(k0 - p0) has empty support
        return np.zeros((2, 2))
    kappa = math.sqrt(k.ksq)
    c00, c01, c11 = _phat_rest(kappa, m, delta_width * k.ksq, tol)
    rest_lower = np.array([[c00, c01], [c01, c11]])
    eta = math.atanh(k.k1 / k.k0)
    boost = np.array([[math.cosh(eta), math.sinh(eta)], [math.sinh(eta), math.cosh(eta)]])
    upper = boost @ (METRIC @ rest_lower @ METRIC) @ boost.T
    return METRIC @ upper @ METRIC


@dataclass(frozen=True)
class OracleExtrapolation:
    tensor: np.ndarray
    widths: tuple[float, ...]
    raw: tuple[np.ndarray, ...]
    error: float

    def coefficient(self, k: Momentum2) -> float:
        """c in P = c (g - k k / k^2)."""
        return tensor_coefficient(self.tensor, k)


def tensor_coefficient(tensor: np.ndarray, k: Momentum2) -> float:
    proj_upper = METRIC @ transverse_projector(k) @ METRIC
    return float(np.sum(proj_upper * tensor))


def phat_extrapolated(k: Momentum2, m: float, delta_width: float = 0.02) -> OracleExtrapolation:
    """Richardson extrapolation of :func:`phat_oracle` in delta_width^2.

    Uses widths w, w/2, w/4; the smearing error of a symmetric Gaussian is a
    series in w^2.  ``error`` is the gap between the 2- and 3-level estimates.
    """
    widths = (delta_width, delta_width / 2, delta_width / 4)
    raw = tuple(phat_oracle(k, m, w) for w in widths)
    two = (4 * raw[2] - raw[1]) / 3
    three = (64 * raw[2] - 20 * raw[1] + raw[0]) / 45
    err = float(np.max(np.abs(three - two)))
    scale = float(np.max(np.abs(three)))
    if scale and err > 0.1 * scale:
        raise QuadratureError(f"oracle extrapolation not converging: gap {err:.3e} vs {scale:.3e}")
    return OracleExtrapolation(three, widths, raw, err)


def pi_from_oracle(k: Momentum2, m: float, delta_width: float) -> np.ndarray:
    """P_{mu nu}(k) - P_{nu mu}(-k) at one width (e^2 stripped)."""
    return phat_oracle(k, m, delta_width) - phat_oracle(-k, m, delta_width).T


# ---------------------------------------------------------------------------
# naive momentum cutoff (Euclidean) for contrast


def _loop_numerator(p0, p1, q0, q1, m2):
    """2(p_mu q_nu + p_nu q_mu - delta p.q) - 2 m^2 delta, components (00, 01, 11)."""
    pq = p0 * q0 + p1 * q1
    return np.array([
        2 * (2 * p0 * q0 - pq) - 2 * m2,
        2 * (p0 * q1 + p1 * q0),
        2 * (2 * p1 * q1 - pq) - 2 * m2,
    ])


def _angular_average(r: np.ndarray, k: np.ndarray, m2: float, rtol: float = 1e-13) -> np.ndarray:
    """(1/2pi) int dtheta of the loop integrand at radii r, by refined trapezoid rule."""
    n = 64
    prev = None
    while True:
        theta = 2 * np.pi * np.arange(n) / n
        p0 = r[:, None] * np.cos(theta)[None, :]
        p1 = r[:, None] * np.sin(theta)[None, :]
        q0, q1 = p0 + k[0], p1 + k[1]
        den = (p0 * p0 + p1 * p1 + m2) * (q0 * q0 + q1 * q1 + m2)
        terms = _loop_numerator(p0, p1, q0, q1, m2) / den
        val = terms.mean(axis=-1)
        # the average cancels at large r, so compare against the integrand size
        scale = np.abs(terms).mean(axis=-1)
        if prev is not None and np.all(np.abs(val - prev) <= rtol * scale):
            return val
        if n > 2**17:
            raise QuadratureError("angular integral not converging")
        prev = val
        n *= 2


def naive_cutoff_polarization(k_euclidean, m: float, cutoff: float, tol: float = 1e-12) -> np.ndarray:
    """One-loop Euclidean vacuum polarization with a sharp cutoff |p| < cutoff (e = 1).

    Pi_{mu nu}(k) = int_{|p|<cutoff} d^2p/(2pi)^2 N_{mu nu}(p, p+k) / ((p^2+m^2)((p+k)^2+m^2))
    with N = 2(p_mu q_nu + p_nu q_mu - delta p.q) - 2 m^2 delta: minus the
    fermion-loop trace, so that the transverse part is positive (a positive
    mass term).  No subtraction is made; the loop momentum is not shifted.
    """
    k = np.asarray(k_euclidean, dtype=float)
    if m < 0 or cutoff <= 0:
        raise ValueError("need m >= 0 and cutoff > 0")
    m2 = m * m
    kn = float(np.linalg.norm(k))
    scales = sorted({s for s in (kn, m, 0.5 * kn, 2 * kn) if 0 < s < cutoff})
    breaks = list(scales)
    base = max(kn, m, 1e-300)
    breaks += [base * 2.0**j for j in range(1, 80) if base * 2.0**j < cutoff]
    if m > 0 and kn > 0:
        breaks += [kn + j * m for j in (-2, -1, 1, 2) if 0 < kn + j * m < cutoff]

    def radial(r):
        return (r * _angular_average(r, k, m2) / (2 * np.pi))

    res = integrate(radial, 0.0, cutoff, breakpoints=breaks, abs_tol=1e-14, rel_tol=tol)
    c00, c01, c11 = res.value
    return np.array([[c00, c01], [c01, c11]])


def longitudinal_defect(tensor: np.ndarray, k) -> float:
    """|khat^mu Pi_{mu nu}| / ||Pi|| (Euclidean contraction, Frobenius norm)."""
    k = np.asarray(k, dtype=float)
    kh = k / np.linalg.norm(k)
    return float(np.linalg.norm(kh @ tensor) / np.linalg.norm(tensor))


def euclidean_decomposition(tensor: np.ndarray, k) -> tuple[float, float]:
    """(T, L) in Pi = T (delta - k k / k^2) + L delta (L = longitudinal part)."""
    k = np.asarray(k, dtype=float)
    kh = k / np.linalg.norm(k)
    longitudinal = float(kh @ tensor @ kh)
    transverse = float(np.trace(tensor)) - longitudinal
    return transverse - longitudinal, longitudinal
