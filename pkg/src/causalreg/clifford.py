"""Dirac matrices in D=2 and D=4 with the mostly-minus Minkowski metric.

Representations (all entries are 0, +-1, +-i so products are exact in
floating point):

D=2
  ``"pauli"`` (default): gamma^0 = sigma_1, gamma^1 = i sigma_2
  ``"dirac"``:           gamma^0 = sigma_3, gamma^1 = i sigma_2

D=4
  ``"dirac"`` (default): gamma^0 = diag(1, 1, -1, -1), gamma^k = [[0, s_k], [-s_k, 0]]
  ``"chiral"``:          gamma^0 = [[0, 1], [1, 0]],   gamma^k = [[0, s_k], [-s_k, 0]]

gamma_5 is gamma^0 gamma^1 in D=2 (phase +1) and i gamma^0 gamma^1 gamma^2 gamma^3
in D=4.  With these phases gamma_5 is hermitian and squares to the identity.

Convention constants (sign of the D=2 duality relation, the trace of
gamma_5 sigma^{01}, the D=4 ``tr[gamma_5 sigma sigma]`` constant) are computed
from the matrices by the functions below, never typed in.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

DiracMatrix = np.ndarray

_I2 = np.eye(2, dtype=complex)
_S1 = np.array([[0, 1], [1, 0]], dtype=complex)
_S2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
_S3 = np.array([[1, 0], [0, -1]], dtype=complex)
_Z2 = np.zeros((2, 2), dtype=complex)

REPRESENTATIONS = {2: ("pauli", "dirac"), 4: ("dirac", "chiral")}


@dataclass(frozen=True)
class MetricSignature:
    dimension: int
    diag: tuple[int, ...]

    def __post_init__(self):
        if self.dimension not in (2, 4):
            raise ValueError(f"dimension must be 2 or 4, got {self.dimension}")
        if self.diag != (1,) + (-1,) * (self.dimension - 1):
            raise ValueError(f"diag must be (+1, -1, ...) of length {self.dimension}, got {self.diag}")

    @classmethod
    def minkowski(cls, dimension: int) -> MetricSignature:
        return cls(dimension, (1,) + (-1,) * (dimension - 1))

    @property
    def g(self) -> np.ndarray:
        return np.diag(np.array(self.diag, dtype=float))


@dataclass(frozen=True)
class LeviCivita:
    """Totally antisymmetric symbol; ``sign`` is eps^{01} (D=2) or eps^{0123} (D=4)."""

    dim: int
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    def upper(self, *idx: int) -> int:
        if len(idx) != self.dim:
            raise ValueError(f"need {self.dim} indices")
        return self.sign * _perm_sign(idx)

    def lower(self, *idx: int) -> int:
        # lowering all indices multiplies by det g = (-1)^(D-1)
        return (-1) ** (self.dim - 1) * self.upper(*idx)

    def tensor(self, lower: bool = False) -> np.ndarray:
        out = np.zeros((self.dim,) * self.dim)
        for idx in itertools.permutations(range(self.dim)):
            out[idx] = self.lower(*idx) if lower else self.upper(*idx)
        return out


def _perm_sign(idx) -> int:
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0
    sign = 1
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if idx[i] > idx[j]:
                sign = -sign
    return sign


def _frozen(m: np.ndarray) -> np.ndarray:
    m = np.array(m, dtype=complex)
    m.setflags(write=False)
    return m


@lru_cache(maxsize=None)
def _gammas(dimension: int, rep: str) -> tuple[np.ndarray, ...]:
    if dimension == 2:
        if rep == "pauli":
            return _frozen(_S1), _frozen(1j * _S2)
        if rep == "dirac":
            return _frozen(_S3), _frozen(1j * _S2)
    elif dimension == 4:
        spatial = tuple(_frozen(np.block([[_Z2, s], [-s, _Z2]])) for s in (_S1, _S2, _S3))
        if rep == "dirac":
            return (_frozen(np.block([[_I2, _Z2], [_Z2, -_I2]])),) + spatial
        if rep == "chiral":
            return (_frozen(np.block([[_Z2, _I2], [_I2, _Z2]])),) + spatial
    raise ValueError(f"unknown representation {rep!r} for D={dimension}")


def _default_rep(sig: MetricSignature, rep: str | None) -> str:
    return REPRESENTATIONS[sig.dimension][0] if rep is None else rep


def identity(sig: MetricSignature) -> DiracMatrix:
    return _frozen(np.eye(sig.dimension))


def gamma(sig: MetricSignature, mu: int, rep: str | None = None) -> DiracMatrix:
    """Upper-index gamma^mu."""
    if not 0 <= mu < sig.dimension:
        raise IndexError(f"gamma index {mu} out of range for D={sig.dimension}")
    return _gammas(sig.dimension, _default_rep(sig, rep))[mu]


def gamma_lower(sig: MetricSignature, mu: int, rep: str | None = None) -> DiracMatrix:
    return _frozen(sig.diag[mu] * gamma(sig, mu, rep))


def gamma5(sig: MetricSignature, rep: str | None = None) -> DiracMatrix:
    g = _gammas(sig.dimension, _default_rep(sig, rep))
    if sig.dimension == 2:
        return _frozen(g[0] @ g[1])
    return _frozen(1j * g[0] @ g[1] @ g[2] @ g[3])


def sigma(sig: MetricSignature, mu: int, nu: int, rep: str | None = None) -> DiracMatrix:
    """sigma^{mu nu} = (i/2)[gamma^mu, gamma^nu]."""
    a, b = gamma(sig, mu, rep), gamma(sig, nu, rep)
    return _frozen(0.5j * (a @ b - b @ a))


def projector(sig: MetricSignature, chirality: int, rep: str | None = None) -> DiracMatrix:
    """(1 + chirality * gamma_5) / 2 for chirality = +1 or -1."""
    if chirality not in (1, -1):
        raise ValueError("chirality must be +1 or -1")
    return _frozen(0.5 * (identity(sig) + chirality * gamma5(sig, rep)))


def euclidean_gamma(sig: MetricSignature, mu: int, rep: str | None = None) -> DiracMatrix:
    """Hermitian Euclidean gammas, indices 1..D with D the Euclidean time.

    gamma_E^j = -i gamma^j for spatial j and gamma_E^D = gamma^0, so that
    {gamma_E^mu, gamma_E^nu} = 2 delta^{mu nu}.
    """
    d = sig.dimension
    if not 1 <= mu <= d:
        raise IndexError(f"Euclidean gamma index {mu} out of range 1..{d}")
    if mu == d:
        return gamma(sig, 0, rep)
    return _frozen(-1j * gamma(sig, mu, rep))


def euclidean_sigma(sig: MetricSignature, mu: int, nu: int, rep: str | None = None) -> DiracMatrix:
    a, b = euclidean_gamma(sig, mu, rep), euclidean_gamma(sig, nu, rep)
    return _frozen(0.5j * (a @ b - b @ a))


def trace_product(ms) -> complex:
    """Trace of the ordered product of the matrices in ``ms``."""
    ms = [np.asarray(m) for m in ms]
    if not ms:
        raise ValueError("empty product")
    shape = ms[0].shape
    for m in ms:
        if m.shape != shape or m.shape[0] != m.shape[1]:
            raise ValueError(f"dimension mismatch: {m.shape} vs {shape}")
    prod = ms[0]
    for m in ms[1:]:
        prod = prod @ m
    return complex(np.trace(prod))


def anticommutator(a: DiracMatrix, b: DiracMatrix) -> np.ndarray:
    return a @ b + b @ a


def commutator(a: DiracMatrix, b: DiracMatrix) -> np.ndarray:
    return a @ b - b @ a


def max_norm(m) -> float:
    return float(np.max(np.abs(m))) if np.size(m) else 0.0


def chirality_commutator_check(sig: MetricSignature, branch: tuple[int, int] = (1, 1),
                               rep: str | None = None) -> float:
    """max over (mu, nu) of |[gamma^mu (1 + s1 g5), gamma^nu (1 + s2 g5)]|."""
    s1, s2 = branch
    one, g5 = identity(sig), gamma5(sig, rep)
    worst = 0.0
    for mu in range(sig.dimension):
        for nu in range(sig.dimension):
            a = gamma(sig, mu, rep) @ (one + s1 * g5)
            b = gamma(sig, nu, rep) @ (one + s2 * g5)
            worst = max(worst, max_norm(commutator(a, b)))
    return worst


@dataclass(frozen=True)
class DualityCheck:
    defect: float
    sign: int
    per_index: tuple[float, ...]


def duality_identity_2d(conv: LeviCivita = LeviCivita(2), rep: str | None = None) -> DualityCheck:
    """Check gamma^mu eps_{mu nu} = s gamma_5 gamma_nu for each nu and report s."""
    if conv.dim != 2:
        raise ValueError("duality identity is specific to D=2")
    sig = MetricSignature.minkowski(2)
    g5 = gamma5(sig, rep)

    def lhs(nu):
        return sum(conv.lower(mu, nu) * gamma(sig, mu, rep) for mu in range(2) if mu != nu)

    rhs0 = g5 @ gamma_lower(sig, 0, rep)
    s = trace_product([np.linalg.inv(rhs0), lhs(0)]).real / 2
    s = 1 if s > 0 else -1
    per = tuple(max_norm(lhs(nu) - s * g5 @ gamma_lower(sig, nu, rep)) for nu in range(2))
    return DualityCheck(max(per), s, per)


def gamma5_sigma_trace_2d(rep: str | None = None) -> complex:
    """tr[gamma_5 sigma^{01}] in D=2 (a convention constant)."""
    sig = MetricSignature.minkowski(2)
    return trace_product([gamma5(sig, rep), sigma(sig, 0, 1, rep)])


def gamma5_sigma_sigma_constant(rep: str | None = None, conv: LeviCivita = LeviCivita(4)) -> complex:
    """kappa with tr[g5 sigma^{mu nu} sigma^{rho sigma}] = kappa eps^{mu nu rho sigma} (D=4)."""
    sig = MetricSignature.minkowski(4)
    g5 = gamma5(sig, rep)
    return trace_product([g5, sigma(sig, 0, 1, rep), sigma(sig, 2, 3, rep)]) / conv.upper(0, 1, 2, 3)


def clifford_defects(sig: MetricSignature, rep: str | None = None) -> dict[str, float]:
    """Defect norm of every structural identity (all should be exactly zero)."""
    d = sig.dimension
    one, g5 = identity(sig), gamma5(sig, rep)
    pp, pm = projector(sig, 1, rep), projector(sig, -1, rep)
    out = {
        "anticommutator": max(
            max_norm(anticommutator(gamma(sig, m, rep), gamma(sig, n, rep)) - 2 * sig.g[m, n] * one)
            for m in range(d) for n in range(d)),
        "gamma5_squared": max_norm(g5 @ g5 - one),
        "gamma5_hermitian": max_norm(g5 - g5.conj().T),
        "gamma5_anticommutes": max(max_norm(anticommutator(g5, gamma(sig, m, rep))) for m in range(d)),
        "gamma5_traceless": float(abs(np.trace(g5))),
        "projector_idempotent": max(max_norm(pp @ pp - pp), max_norm(pm @ pm - pm)),
        "projector_orthogonal": max_norm(pp @ pm),
        "projector_complete": max_norm(pp + pm - one),
        "sigma_antisymmetric": max(
            max_norm(sigma(sig, m, n, rep) + sigma(sig, n, m, rep)) for m in range(d) for n in range(d)),
        "chirality_commutator_plus": chirality_commutator_check(sig, (1, 1), rep),
        "chirality_commutator_minus": chirality_commutator_check(sig, (-1, -1), rep),
    }
    if d == 2:
        out["duality_2d"] = duality_identity_2d(LeviCivita(2), rep).defect
    else:
        out["g5_sigma_sigma_epsilon"] = epsilon_proportionality_defect(rep)
    return out


def epsilon_proportionality_defect(rep: str | None = None) -> float:
    """max |tr[g5 s^{mn} s^{rs}] - kappa eps^{mnrs}| over all index quadruples (D=4)."""
    sig = MetricSignature.minkowski(4)
    eps = LeviCivita(4)
    kappa = gamma5_sigma_sigma_constant(rep, eps)
    g5 = gamma5(sig, rep)
    worst = 0.0
    for idx in itertools.product(range(4), repeat=4):
        m, n, r, s = idx
        t = trace_product([g5, sigma(sig, m, n, rep), sigma(sig, r, s, rep)])
        worst = max(worst, abs(t - kappa * eps.upper(*idx)))
    return worst
