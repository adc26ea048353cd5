"""Named end-to-end checks with their tolerances and runtime budgets.

Each check returns a :class:`CheckResult`; ``run_all`` executes a suite in a
fixed order.  Randomized checks draw from ``numpy.random.default_rng(seed)``.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import anomaly, causal2d, clifford, distext, smear2d
from .quadrature import composite_gauss_legendre
from .testfn import SHAPES, BumpProfile, Scaled, TaylorWeight, jet_subtract


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float
    budget: float

    @property
    def within_budget(self) -> bool:
        return self.seconds <= self.budget


def boson_mass(seed: int = 1) -> tuple[bool, str]:
    r0, rms = causal2d.massless_limit(1.0)
    gap = abs(r0 - 1j / math.pi)
    m2 = causal2d.boson_mass_squared(1.0)
    ok = gap <= 1e-4 and abs(m2 - 1 / math.pi) <= 1e-4
    return ok, f"|r0 - i/pi| = {gap:.2e}, mass^2 = {m2:.10f} (1/pi = {1 / math.pi:.10f})"


def dispersion_consistency(seed: int = 1) -> tuple[bool, str]:
    worst = 0.0
    for x in np.geomspace(1e-6, 0.24, 20):
        q = causal2d.rhat_quadrature(1.0, x).value
        c = causal2d.rhat_closed(1.0, x)
        worst = max(worst, abs(q - c) / abs(c))
    return worst <= 1e-6, f"max relative error {worst:.2e} over 20 ratios"


def transversality(seed: int = 1) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(100):
        m = rng.uniform(0.05, 2.0)
        mass_shell = math.sqrt(rng.uniform(4.0001, 50.0)) * m
        k1 = rng.uniform(-5, 5)
        k0 = rng.choice([-1, 1]) * math.hypot(mass_shell, k1)
        pi = causal2d.polarization(causal2d.Momentum2(k0, k1), causal2d.ModelParams(m, 1.0))
        c = pi.components
        worst = max(worst, float(np.linalg.norm(pi.k.upper @ c) / np.linalg.norm(c)))
    return worst <= 1e-10, f"max |k.Pi| / ||Pi|| = {worst:.2e} over 100 momenta"


ORACLE_POINTS = ((3.0, 0.0, 1.0), (3.0, 1.0, 1.0), (2.5, -1.2, 0.5), (5.0, 2.0, 1.5), (1.5, 0.3, 0.2))


def oracle_equivalence(seed: int = 1) -> tuple[bool, str]:
    worst = 0.0
    for k0, k1, m in ORACLE_POINTS:
        k = causal2d.Momentum2(k0, k1)
        coef = causal2d.phat_extrapolated(k, m).coefficient(k)
        exact = k.ksq * causal2d.dhat(k, m)
        worst = max(worst, abs(coef - exact) / abs(exact))
    return worst <= 1e-3, f"max relative error {worst:.2e} at {len(ORACLE_POINTS)} points"


def gauge_contrast(seed: int = 1) -> tuple[bool, str]:
    k = np.array([0.6, 0.8])
    defects = [causal2d.longitudinal_defect(causal2d.naive_cutoff_polarization(k, 0.3, c), k)
               for c in (10.0, 100.0, 1000.0)]
    causal = causal2d.polarization(causal2d.Momentum2(0.6, 0.8 + 1.0), causal2d.ModelParams(0.3))
    ok = min(defects) >= 0.1 and causal.longitudinal_defect <= 1e-10
    return ok, (f"naive defects {', '.join(f'{d:.4f}' for d in defects)}; "
                f"causal defect {causal.longitudinal_defect:.1e}")


def anomaly_4d(seed: int = 1) -> tuple[bool, str]:
    target = 1 / (16 * math.pi**2)
    worst = 0.0
    for shape in SHAPES:
        for scale in (0.5, 1.0, 7.0):
            r = anomaly.RegulatorProfile.of(shape, scale)
            worst = max(worst, abs(anomaly.radial_integral_4d(r) - target))
    rng = np.random.default_rng(seed)
    spreads, coefs = [], []
    for rep in clifford.REPRESENTATIONS[4]:
        ratios = []
        for _ in range(20):
            M = rng.normal(size=(4, 4))
            F = anomaly.FieldStrength(4, M - M.T)
            ratios.append(anomaly.trace_factor_4d(F, rep) / anomaly.dual_contraction(F))
        spreads.append(float(np.ptp(ratios)))
        F = anomaly.FieldStrength.from_components(4, {(0, 1): 1.0, (2, 3): 1.0})
        coefs.append(anomaly.anomaly_density(F, 1.0, rep=rep).coefficient)
    coef_err = max(abs(c / target - 1) for c in coefs)
    ok = worst <= 1e-8 and max(spreads) <= 1e-12 and coef_err <= 1e-8
    return ok, (f"radial max error {worst:.1e}; trace ratio spread {max(spreads):.1e}; "
                f"coefficient relative error {coef_err:.1e}")


def anomaly_2d(seed: int = 1) -> tuple[bool, str]:
    vals = [anomaly.radial_integral_2d(anomaly.RegulatorProfile.of(s, c))
            for s in SHAPES for c in (0.5, 1.0, 7.0)]
    spread = float(np.ptp(vals))
    err = max(abs(v + 1 / (4 * math.pi)) for v in vals)
    return spread <= 1e-10 and err <= 1e-8, f"spread {spread:.1e}; |I + 1/4pi| <= {err:.1e}"


def smear_covariance(seed: int = 1) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    g = smear2d.Grid2(64)
    rho = BumpProfile(0.2)
    good, bad = [], []
    for _ in range(50):
        psi = smear2d.LatticeSpinor.random(g, rng)
        A = smear2d.LatticeGauge.random(g, rng)
        lam = smear2d.smooth_random_field(g, rng, amplitude=3.0)
        x = tuple(int(v) for v in rng.integers(0, g.n, 2))
        good.append(smear2d.covariance_check(psi, A, lam, rho, x))
        bad.append(smear2d.covariance_check(psi, A, lam, rho, x, gradient_kind="backward"))
    ok = max(good) <= 1e-10 and min(bad) > 1e-4
    return ok, f"max defect {max(good):.1e}; mismatched-gradient control min {min(bad):.1e}"


def bosonization(seed: int = 1) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    g = smear2d.Grid2(64)
    rho = BumpProfile(0.2)
    worst, control = 0.0, math.inf
    for mode in ((3, 1), (1, 0), (2, -5)):
        phi = smear2d.mode_potential(g, mode)
        psi = smear2d.LatticeSpinor.random(g, rng)
        x = tuple(int(v) for v in rng.integers(0, g.n, 2))
        for rep in clifford.REPRESENTATIONS[2]:
            r = smear2d.bosonization_check(phi, psi, rho, x, rep=rep)
            worst = max(worst, r.defect)
            flipped = smear2d.bosonization_check(phi, psi, rho, x, rep=rep, sign=-r.sign)
            control = min(control, flipped.defect / np.linalg.norm(r.direct))
    ok = worst <= 1e-10 and control > 1e-2
    return ok, f"max defect {worst:.1e}; flipped-sign control (relative) min {control:.2f}"


def clifford_identities(seed: int = 1) -> tuple[bool, str]:
    worst, where = 0.0, ""
    for d, reps in clifford.REPRESENTATIONS.items():
        sig = clifford.MetricSignature.minkowski(d)
        for rep in reps:
            for name, val in clifford.clifford_defects(sig, rep).items():
                if val > worst or not where:
                    worst, where = val, f"{name} (D={d}, {rep})"
    return worst <= 1e-13, f"max defect {worst:.1e} at {where}"


def finite_part(seed: int = 1) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(5):
        f = Scaled(BumpProfile(rng.uniform(0.5, 2), str(rng.choice(SHAPES)), rng.uniform(-0.4, 0.4)),
                   rng.uniform(0.5, 2))
        for k in (1, 2):
            w = TaylorWeight(BumpProfile(rng.uniform(0.5, 1.5)), k - 1)
            val = distext.pair_finite_part(distext.PowerSingularity(k), f, w).value
            g = jet_subtract(f, w)
            lo, hi = g.support()
            oracle = composite_gauss_legendre(lambda x, g=g, k=k: g(x) / x**k, lo, hi, 4000,
                                              breakpoints=[0.0])
            worst = max(worst, abs(val - oracle))
    rows = distext.bphz_demo(1.0, 2.0, [1e2, 1e4, 1e6])
    gap = abs(rows[-1].subtracted - math.log(4.0) / 2)
    return worst <= 1e-7 and gap <= 1e-6, f"max |pairing - oracle| {worst:.1e}; BPHZ gap {gap:.1e}"


CHECKS: dict[str, tuple[Callable[[int], tuple[bool, str]], float]] = {
    "boson_mass": (boson_mass, 1.0),
    "dispersion_consistency": (dispersion_consistency, 30.0),
    "transversality": (transversality, 5.0),
    "oracle_equivalence": (oracle_equivalence, 120.0),
    "gauge_violation_contrast": (gauge_contrast, 60.0),
    "anomaly_coefficient_4d": (anomaly_4d, 10.0),
    "anomaly_regulator_independence_2d": (anomaly_2d, 5.0),
    "smearing_gauge_covariance": (smear_covariance, 60.0),
    "bosonization_reduction": (bosonization, 30.0),
    "clifford_identities": (clifford_identities, 1.0),
    "finite_part_engine": (finite_part, 10.0),
}

SUITES = {
    "all": tuple(CHECKS),
    "fast": tuple(n for n in CHECKS if n not in ("oracle_equivalence", "smearing_gauge_covariance")),
}


def run_check(name: str, seed: int = 1) -> CheckResult:
    fn, budget = CHECKS[name]
    t0 = time.perf_counter()
    try:
        passed, detail = fn(seed)
    except Exception as exc:  # reported as a failed check
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    return CheckResult(name, bool(passed), detail, time.perf_counter() - t0, budget)


def run_all(suite: str = "all", seed: int = 1) -> list[CheckResult]:
    return [run_check(n, seed) for n in SUITES[suite]]
