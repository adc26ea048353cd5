"""Smooth compactly supported test functions.

Two radial profiles are provided, both equal to 1 at the centre and exactly 0
for ``|x - center| >= radius``:

* ``"bump"``: exp(1 - 1/(1 - t^2)), t = |x - center| / radius;
* ``"flattop"``: identically 1 for t <= 1/2, glued to 0 at t = 1 by the smooth
  step 1/(1 + exp(1/s - 1/(1 - s))) with s = 2(1 - t).

Derivatives up to order 4 are closed form (Faa di Bruno on the exponent or on
the logistic), not finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial
from typing import Callable, Protocol, Sequence

import numpy as np

MAX_ORDER = 4
SHAPES = ("bump", "flattop")


class CoverageGap(ValueError):
    """A partition of unity left some point with no member support."""


class Smooth(Protocol):
    def __call__(self, x): ...

    def derivative(self, x, k: int): ...


def _faa_di_bruno(outer: Sequence[np.ndarray], inner: Sequence[np.ndarray], k: int) -> np.ndarray:
    """k-th derivative of F(g(u)); outer[j] = F^(j)(g), inner[j] = g^(j)."""
    if k == 0:
        return outer[0]
    g1 = inner[1]
    if k == 1:
        return outer[1] * g1
    g2 = inner[2]
    if k == 2:
        return outer[2] * g1**2 + outer[1] * g2
    g3 = inner[3]
    if k == 3:
        return outer[3] * g1**3 + 3 * outer[2] * g1 * g2 + outer[1] * g3
    g4 = inner[4]
    return (outer[4] * g1**4 + 6 * outer[3] * g1**2 * g2
            + outer[2] * (3 * g2**2 + 4 * g1 * g3) + outer[1] * g4)


def _bump_unit(u: np.ndarray, k: int) -> np.ndarray:
    """k-th derivative of exp(1 - 1/(1 - u^2)) in u, zero for |u| >= 1."""
    out = np.zeros_like(u, dtype=float)
    inside = np.abs(u) < 1
    v = u[inside]
    # h = 1 - 1/(1-u^2) = 1 - (1/(1-u) + 1/(1+u))/2
    h = [1 - 1 / (1 - v**2)]
    for n in range(1, k + 1):
        h.append(-0.5 * factorial(n) * ((1 - v) ** -(n + 1) + (-1) ** n * (1 + v) ** -(n + 1)))
    e = np.exp(h[0])
    out[inside] = _faa_di_bruno([e] * (k + 1), h, k)
    return out


# derivatives of L(q) = 1/(1 + e^q) as polynomials in L: L' = L^2 - L
def _logistic_polys(kmax: int) -> list[np.polynomial.Polynomial]:
    P = np.polynomial.Polynomial
    dl = P([0, -1, 1])
    polys = [P([0, 1])]
    for _ in range(kmax):
        polys.append(polys[-1].deriv() * dl)
    return polys


_LOGISTIC = _logistic_polys(MAX_ORDER)


def _smoothstep(s: np.ndarray, k: int) -> np.ndarray:
    """k-th derivative of S(s) = 1/(1 + exp(1/s - 1/(1-s))) for 0 < s < 1."""
    q = [1 / s - 1 / (1 - s)]
    for n in range(1, k + 1):
        q.append((-1) ** n * factorial(n) / s ** (n + 1) - factorial(n) / (1 - s) ** (n + 1))
    # 1/(1+e^q) evaluated without overflow
    ell = np.where(q[0] > 0, np.exp(-np.abs(q[0])) / (1 + np.exp(-np.abs(q[0]))),
                   1 / (1 + np.exp(-np.abs(q[0]))))
    outer = [p(ell) for p in _LOGISTIC[: k + 1]]
    return _faa_di_bruno(outer, q, k)


def _flattop_unit(u: np.ndarray, k: int) -> np.ndarray:
    out = np.zeros_like(u, dtype=float)
    a = np.abs(u)
    if k == 0:
        out[a <= 0.5] = 1.0
    band = (a > 0.5) & (a < 1)
    s = 2 * (1 - a[band])
    # ds/du = -2 sign(u)
    out[band] = (-2 * np.sign(u[band])) ** k * _smoothstep(s, k)
    return out


_UNIT = {"bump": _bump_unit, "flattop": _flattop_unit}


@dataclass(frozen=True)
class BumpProfile:
    radius: float
    shape: str = "bump"
    center: float | tuple[float, ...] = 0.0

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        if self.shape not in SHAPES:
            raise ValueError(f"unknown shape {self.shape!r}; expected one of {SHAPES}")

    def __call__(self, x):
        """Value at x (scalar, or array whose last axis is the vector index for D > 1)."""
        c = np.asarray(self.center, dtype=float)
        x = np.asarray(x, dtype=float)
        if c.ndim == 0:
            u = (x - c) / self.radius
        else:
            u = np.linalg.norm(x - c, axis=-1) / self.radius
        out = _UNIT[self.shape](np.atleast_1d(u), 0)
        return out.reshape(np.shape(u)) if np.ndim(u) else float(out[0])

    def derivative(self, x, k: int):
        """k-th derivative along the line (1D profiles only)."""
        if not 0 <= k <= MAX_ORDER:
            raise ValueError(f"derivative order {k} unsupported (max {MAX_ORDER})")
        if np.ndim(self.center) != 0:
            raise ValueError("derivative is defined for 1D profiles only")
        u = (np.asarray(x, dtype=float) - self.center) / self.radius
        out = _UNIT[self.shape](np.atleast_1d(u), k) / self.radius**k
        return out.reshape(np.shape(u)) if np.ndim(u) else float(out[0])

    def support(self) -> tuple[float, float]:
        return (self.center - self.radius, self.center + self.radius)


@dataclass(frozen=True)
class MomentumProfile:
    """rho~(p^2 / Lambda^2) with rho~ a 1D profile of u = p^2 centred at 0."""

    base: BumpProfile = BumpProfile(1.0)
    scale: float = 1.0

    def __post_init__(self):
        if self.base.center != 0.0:
            raise ValueError("momentum profile base must be centred at u = 0")
        if self.scale <= 0:
            raise ValueError("scale must be positive")

    def __call__(self, psq):
        return momentum_scale(self, psq)

    def derivative(self, psq, k: int):
        """d^k/d(p^2)^k."""
        _check_psq(psq)
        lam2 = self.scale**2
        return self.base.derivative(np.asarray(psq) / lam2, k) / lam2**k

    @property
    def support_end(self) -> float:
        return self.base.radius * self.scale**2


def _check_psq(psq):
    if np.any(np.asarray(psq) < 0):
        raise ValueError("p^2 must be nonnegative")


def momentum_scale(p: MomentumProfile, psq):
    _check_psq(psq)
    return p.base(np.asarray(psq, dtype=float) / p.scale**2) if np.ndim(psq) else p.base(psq / p.scale**2)


@dataclass(frozen=True)
class PartitionOfUnity:
    interval: tuple[float, float]
    spacing: float
    members: tuple[BumpProfile, ...]

    @property
    def overlap(self) -> float:
        """Support radius over spacing; > 1/2 means neighbours overlap."""
        return self.members[0].radius / self.spacing

    def raw(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return np.array([m(x) for m in self.members])

    def weights(self, x) -> np.ndarray:
        """Normalized members f_i / sum_j f_j, shape (members, points)."""
        raw = self.raw(x)
        total = raw.sum(axis=0)
        if np.any(total == 0):
            bad = np.atleast_1d(x)[total == 0][0]
            raise CoverageGap(f"coverage gap at x = {bad}")
        return raw / total

    def __call__(self, x):
        return self.weights(x).sum(axis=0)


def pou_build(interval: tuple[float, float], spacing: float, radius: float | None = None,
              shape: str = "bump") -> PartitionOfUnity:
    """Lattice of bumps at spacing ``spacing`` covering ``interval``.

    ``radius`` defaults to ``spacing`` (each point sees two or three members).
    """
    a, b = interval
    if not b > a or spacing <= 0:
        raise ValueError("need a < b and positive spacing")
    radius = spacing if radius is None else radius
    n = int(np.ceil((b - a) / spacing - 1e-12))
    centers = a + spacing * np.arange(n + 1)
    members = tuple(BumpProfile(radius, shape, float(c)) for c in centers)
    pou = PartitionOfUnity((a, b), spacing, members)
    # open supports: the midpoint between centres is covered iff radius > spacing / 2
    probes = np.concatenate([centers, centers[:-1] + 0.5 * spacing, [a, b]])
    pou.weights(probes)
    return pou


@dataclass(frozen=True)
class TaylorWeight:
    """Weight w used to cut off the subtracted jet: w(0) = 1 and w^(j)(0) = 0 for 1 <= j <= order."""

    w: BumpProfile | Smooth
    order: int

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("order must be nonnegative")
        if self.w(0.0) != 1.0:
            raise ValueError(f"weight must satisfy w(0) = 1, got {self.w(0.0)}")
        for j in range(1, min(self.order, MAX_ORDER) + 1):
            if abs(self.w.derivative(0.0, j)) > 1e-12:
                raise ValueError(
                    f"weight derivative of order {j} at 0 is nonzero; "
                    f"it cannot cut off a jet of order {self.order}")

    def __call__(self, x):
        return self.w(x)

    def derivative(self, x, k: int):
        return self.w.derivative(x, k)

    def support(self) -> tuple[float, float]:
        return self.w.support()


@dataclass(frozen=True)
class JetSubtracted:
    """x -> f(x) - w(x) sum_{k <= order} x^k f^(k)(0) / k!"""

    f: Smooth
    weight: TaylorWeight
    jet: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if not self.jet:
            jet = tuple(float(self.f.derivative(0.0, k)) for k in range(self.weight.order + 1))
            object.__setattr__(self, "jet", jet)

    def _poly(self, x, j: int):
        """j-th derivative of the Taylor polynomial."""
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for k, c in enumerate(self.jet):
            if k >= j:
                out = out + c * x ** (k - j) / factorial(k - j)
        return out

    def __call__(self, x):
        return self.f(x) - self.weight(x) * self._poly(x, 0)

    def derivative(self, x, k: int):
        out = self.f.derivative(x, k)
        for j in range(k + 1):
            out = out - comb(k, j) * self.weight.derivative(x, k - j) * self._poly(x, j)
        return out

    def support(self) -> tuple[float, float]:
        lf, hf = self.f.support()
        lw, hw = self.weight.support()
        return (min(lf, lw), max(hf, hw))


def jet_subtract(f: Smooth, w: TaylorWeight) -> JetSubtracted:
    return JetSubtracted(f, w)


@dataclass(frozen=True)
class Product:
    """Pointwise product of two smooth functions with Leibniz derivatives."""

    a: Smooth
    b: Smooth

    def __call__(self, x):
        return self.a(x) * self.b(x)

    def derivative(self, x, k: int):
        return sum(comb(k, j) * self.a.derivative(x, j) * self.b.derivative(x, k - j)
                   for j in range(k + 1))

    def support(self) -> tuple[float, float]:
        sa = getattr(self.a, "support", None)
        sb = getattr(self.b, "support", None)
        if sa and sb:
            (la, ha), (lb, hb) = sa(), sb()
            return (max(la, lb), min(ha, hb))
        return (sa or sb)()


@dataclass(frozen=True)
class Scaled:
    """c * f"""

    f: Smooth
    c: float

    def __call__(self, x):
        return self.c * self.f(x)

    def derivative(self, x, k: int):
        return self.c * self.f.derivative(x, k)

    def support(self):
        return self.f.support()


@dataclass(frozen=True)
class Analytic:
    """Entire function given by a callable for its k-th derivative (no compact support)."""

    nth: Callable[[np.ndarray, int], np.ndarray]

    def __call__(self, x):
        return self.nth(np.asarray(x, dtype=float), 0)

    def derivative(self, x, k: int):
        return self.nth(np.asarray(x, dtype=float), k)


COSINE = Analytic(lambda x, k: np.cos(x + k * np.pi / 2))
