"""Gauge-covariant smearing of a 2-spinor field on a periodic 2D lattice.

The smeared field at site x is

    Psi(x) = sum_y a^2 rho(y - x) exp[i e Phi_{x,y}] psi(y),
    Phi_{x,y} = sum_z a^2 (d+_mu C_{x,y})(z) A_mu(z),

where C_{x,y} solves the lattice Poisson problem  d-_mu d+_mu C = delta_x - delta_y
(continuum-normalized deltas, delta_x = 1/a^2 at x).  Forward differences d+
build gradients and backward differences d- build divergences; on a periodic
grid d- is minus the adjoint of d+, so summation by parts is exact and

    sum_z a^2 (d+ C)(d+ Lambda) = -(Lambda(x) - Lambda(y)).

Gauge transformations act as psi -> exp(-i e Lambda) psi, A -> A + d+ Lambda,
under which Psi(x) -> exp(-i e Lambda(x)) Psi(x) exactly.

Axis mu = 0, 1 is the first, second array index; eps_{01} = +1.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import clifford
from .testfn import BumpProfile

Site = tuple[int, int]

_SIG2 = clifford.MetricSignature.minkowski(2)
EPSILON = clifford.LeviCivita(2).tensor()


@dataclass(frozen=True)
class Grid2:
    n: int
    length: float = 1.0

    def __post_init__(self):
        if self.n < 8 or self.n & (self.n - 1):
            raise ValueError("n must be a power of two and at least 8")
        if self.length <= 0:
            raise ValueError("length must be positive")

    @property
    def a(self) -> float:
        return self.length / self.n

    def site(self, x) -> Site:
        i, j = (int(v) % self.n for v in x)
        return (i, j)

    def offsets(self, x: Site) -> np.ndarray:
        """Minimum-image displacement z - x for every site z, shape (2, n, n)."""
        idx = np.arange(self.n)
        d = [(idx - x[k] + self.n // 2) % self.n - self.n // 2 for k in range(2)]
        di, dj = np.meshgrid(d[0], d[1], indexing="ij")
        return np.stack([di, dj]) * self.a

    def coordinates(self) -> np.ndarray:
        idx = np.arange(self.n) * self.a
        return np.stack(np.meshgrid(idx, idx, indexing="ij"))


def forward_diff(f: np.ndarray, mu: int, a: float) -> np.ndarray:
    """d+_mu on the last two axes (axis -2 is mu=0)."""
    ax = -2 + mu
    return (np.roll(f, -1, axis=ax) - f) / a


def backward_diff(f: np.ndarray, mu: int, a: float) -> np.ndarray:
    ax = -2 + mu
    return (f - np.roll(f, 1, axis=ax)) / a


def gradient(f: np.ndarray, a: float, kind: str = "forward") -> np.ndarray:
    diff = {"forward": forward_diff, "backward": backward_diff}[kind]
    return np.stack([diff(f, mu, a) for mu in range(2)], axis=-3)


def divergence(A: np.ndarray, a: float) -> np.ndarray:
    """Backward divergence, the negative adjoint of the forward gradient."""
    return backward_diff(A[..., 0, :, :], 0, a) + backward_diff(A[..., 1, :, :], 1, a)


def laplacian(f: np.ndarray, a: float) -> np.ndarray:
    return divergence(gradient(f, a), a)


@dataclass(frozen=True)
class LatticeSpinor:
    grid: Grid2
    data: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.data, dtype=complex)
        if d.shape != (self.grid.n, self.grid.n, 2):
            raise ValueError(f"spinor data must have shape ({self.grid.n}, {self.grid.n}, 2)")
        if not np.all(np.isfinite(d)):
            raise ValueError("spinor data must be finite")
        object.__setattr__(self, "data", d)

    @classmethod
    def random(cls, grid: Grid2, rng: np.random.Generator) -> LatticeSpinor:
        shape = (grid.n, grid.n, 2)
        return cls(grid, rng.normal(size=shape) + 1j * rng.normal(size=shape))


@dataclass(frozen=True)
class LatticeGauge:
    grid: Grid2
    A: np.ndarray
    phi: np.ndarray | None = None

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        if A.shape != (2, self.grid.n, self.grid.n):
            raise ValueError(f"gauge data must have shape (2, {self.grid.n}, {self.grid.n})")
        object.__setattr__(self, "A", A)

    @classmethod
    def zero(cls, grid: Grid2) -> LatticeGauge:
        return cls(grid, np.zeros((2, grid.n, grid.n)))

    @classmethod
    def random(cls, grid: Grid2, rng: np.random.Generator, scale: float = 1.0) -> LatticeGauge:
        return cls(grid, scale * rng.normal(size=(2, grid.n, grid.n)))

    @classmethod
    def from_potential(cls, grid: Grid2, phi: np.ndarray) -> LatticeGauge:
        """A_mu = eps_{mu nu} d-_nu phi, divergence-free by construction."""
        phi = np.asarray(phi, dtype=float)
        dphi = gradient(phi, grid.a, "backward")
        return cls(grid, np.einsum("mn,nij->mij", EPSILON, dphi), phi)

    def lorenz_defect(self) -> float:
        return float(np.max(np.abs(divergence(self.A, self.grid.a))))


@dataclass(frozen=True)
class GaugeKernel:
    grid: Grid2
    x: Site
    y: Site
    C: np.ndarray
    trivial: bool = False

    def residual(self) -> float:
        """max |a^2 Lap C - (delta_x - delta_y)| in lattice units."""
        src = _source(self.grid, self.x, [self.y])[0]
        return float(np.max(np.abs(self.grid.a**2 * laplacian(self.C, self.grid.a) - src)))


def _source(g: Grid2, x: Site, ys) -> np.ndarray:
    src = np.zeros((len(ys), g.n, g.n))
    for k, y in enumerate(ys):
        src[k, x[0], x[1]] += 1.0
        src[k, y[0], y[1]] -= 1.0
    return src


@functools.cache
def _inverse_symbol(n: int, a: float) -> np.ndarray:
    s = np.sin(np.pi * np.arange(n) / n) ** 2
    lam = -(4.0 / a**2) * (s[:, None] + s[None, :])
    inv = np.zeros_like(lam)
    inv[lam != 0] = 1.0 / lam[lam != 0]
    return inv


def _solve(g: Grid2, x: Site, ys) -> np.ndarray:
    # Lap C = (delta_x - delta_y) / a^2; zero mode of C set to 0
    rhs = _source(g, x, ys) / g.a**2
    return np.fft.ifft2(np.fft.fft2(rhs) * _inverse_symbol(g.n, g.a)).real


def solve_kernel(g: Grid2, x, y) -> GaugeKernel:
    x, y = g.site(x), g.site(y)
    if x == y:
        return GaugeKernel(g, x, y, np.zeros((g.n, g.n)), trivial=True)
    return GaugeKernel(g, x, y, _solve(g, x, [y])[0])


def _check_radius(rho: BumpProfile, g: Grid2) -> None:
    if not 2 * g.a <= rho.radius <= g.n * g.a / 4:
        raise ValueError(f"smearing radius {rho.radius} outside [2a, n a / 4] = "
                         f"[{2 * g.a}, {g.n * g.a / 4}]")


@functools.lru_cache(maxsize=8)
def _ball(g: Grid2, x: Site, radius: float, shape: str):
    """Sites y inside the support of rho(y - x), their weights and kernel gradients."""
    off = g.offsets(x)
    dist = np.hypot(off[0], off[1])
    mask = dist < radius
    ys = [tuple(int(v) for v in s) for s in np.argwhere(mask)]
    weights = BumpProfile(radius, shape)(dist[mask])
    C = _solve(g, x, ys)
    fwd = gradient(C, g.a, "forward")
    bwd = gradient(C, g.a, "backward")
    for arr in (weights, fwd, bwd):
        arr.flags.writeable = False
    return ys, weights, fwd, bwd


def kernel_pairing(g: Grid2, x: Site, rho: BumpProfile, A: np.ndarray) -> np.ndarray:
    """Phi_{x,y} = sum_z a^2 (d+ C_{x,y}) . A for every y in the ball."""
    _, _, fwd, _ = _ball(g, x, rho.radius, rho.shape)
    return g.a**2 * np.einsum("kmij,mij->k", fwd, A)


def smear(psi: LatticeSpinor, A: LatticeGauge, rho: BumpProfile, g: Grid2, x,
          e: float = 1.0) -> np.ndarray:
    """Smeared 2-spinor Psi(x)."""
    _check_radius(rho, g)
    x = g.site(x)
    ys, w, _, _ = _ball(g, x, rho.radius, rho.shape)
    phase = np.exp(1j * e * kernel_pairing(g, x, rho, A.A))
    vals = np.array([psi.data[y] for y in ys])
    return g.a**2 * np.einsum("k,k,ks->s", w, phase, vals)


def gauge_transform(psi: LatticeSpinor, A: LatticeGauge, Lambda: np.ndarray, e: float = 1.0,
                    gradient_kind: str = "forward") -> tuple[LatticeSpinor, LatticeGauge]:
    """psi -> exp(-i e Lambda) psi, A -> A + grad Lambda.

    ``gradient_kind="backward"`` mismatches the kernel's forward gradient and
    serves as a negative control.
    """
    Lambda = np.asarray(Lambda, dtype=float)
    g = psi.grid
    new_psi = LatticeSpinor(g, np.exp(-1j * e * Lambda)[..., None] * psi.data)
    return new_psi, LatticeGauge(g, A.A + gradient(Lambda, g.a, gradient_kind))


def smooth_random_field(g: Grid2, rng: np.random.Generator, modes: int = 3,
                        amplitude: float = 1.0) -> np.ndarray:
    """Real trigonometric polynomial with wave numbers |k_i| <= modes."""
    z = g.coordinates() * (2 * np.pi / g.length)
    out = np.zeros((g.n, g.n))
    for k1 in range(-modes, modes + 1):
        for k2 in range(0, modes + 1):
            c, s = rng.normal(size=2) * amplitude / (1 + k1 * k1 + k2 * k2)
            arg = k1 * z[0] + k2 * z[1]
            out += c * np.cos(arg) + s * np.sin(arg)
    return out


def covariance_check(psi: LatticeSpinor, A: LatticeGauge, Lambda: np.ndarray, rho: BumpProfile,
                     x, e: float = 1.0, gradient_kind: str = "forward") -> float:
    """|| smear(gauge_transform(psi, A, Lambda)) - exp(-i e Lambda(x)) smear(psi, A) ||."""
    g = psi.grid
    x = g.site(x)
    psi2, A2 = gauge_transform(psi, A, Lambda, e, gradient_kind)
    lhs = smear(psi2, A2, rho, g, x, e)
    rhs = np.exp(-1j * e * Lambda[x]) * smear(psi, A, rho, g, x, e)
    return float(np.linalg.norm(lhs - rhs))


def mode_potential(g: Grid2, mode: tuple[int, int], amplitude: float = 0.5) -> np.ndarray:
    z = g.coordinates() * (2 * np.pi / g.length)
    return amplitude * np.cos(mode[0] * z[0] + mode[1] * z[1])


@dataclass(frozen=True)
class BosonizationResult:
    defect: float
    sign: int
    direct: np.ndarray
    kernel: np.ndarray


def bosonization_check(phi: np.ndarray, psi: LatticeSpinor, rho: BumpProfile, x, e: float = 1.0,
                       rep: str | None = None, sign: int | None = None) -> BosonizationResult:
    """Compare two forms of the smeared field for A_mu = eps_{mu nu} d-_nu phi.

    Direct form: phase exp[i e g5 (phi(x) - phi(y))].  Kernel form: phase
    expm(i e M) with M = a_par + s g5 a_perp, where a_par = <d+ C, A> and
    a_perp = <eps d- C, A> are scalar-kernel pairings and s is the duality sign
    gamma^mu eps_{mu nu} = s g5 gamma_nu.  ``sign`` overrides s.
    """
    g = psi.grid
    _check_radius(rho, g)
    x = g.site(x)
    gauge = LatticeGauge.from_potential(g, phi)
    s = clifford.duality_identity_2d(rep=rep).sign if sign is None else sign
    g5 = np.asarray(clifford.gamma5(_SIG2, rep))
    one = np.eye(2)
    ys, w, fwd, bwd = _ball(g, x, rho.radius, rho.shape)
    vals = np.array([psi.data[y] for y in ys])

    dphi = np.array([gauge.phi[x] - gauge.phi[y] for y in ys])
    direct_ph = np.cos(e * dphi)[:, None, None] * one + 1j * np.sin(e * dphi)[:, None, None] * g5
    direct = g.a**2 * np.einsum("k,kst,kt->s", w, direct_ph, vals)

    a_par = g.a**2 * np.einsum("kmij,mij->k", fwd, gauge.A)
    a_perp = g.a**2 * np.einsum("mn,knij,mij->k", EPSILON, bwd, gauge.A)
    kern_ph = np.array([scipy.linalg.expm(1j * e * (p * one + s * q * g5))
                        for p, q in zip(a_par, a_perp)])
    kernel = g.a**2 * np.einsum("k,kst,kt->s", w, kern_ph, vals)
    return BosonizationResult(float(np.linalg.norm(direct - kernel)), s, direct, kernel)
