"""Command-line entry point.

Every subcommand writes CSV or JSON to standard output.  Exit status is 0 on
success, 1 when a computation fails and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from typing import Sequence

import numpy as np

from . import acceptance, anomaly, causal2d, clifford, distext, smear2d
from .testfn import SHAPES, BumpProfile, TaylorWeight


# ---------------------------------------------------------------------------
# argument types (argparse names the flag in its diagnostic)


class UsageError(Exception):
    """A flag value that is only invalid in combination with other flags."""

    def __init__(self, flag: str, message: str):
        super().__init__(f"argument {flag}: {message}")


def _float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be finite, got {text!r}")
    return v


def positive_float(text: str) -> float:
    v = _float(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
    return v


def nonnegative_float(text: str) -> float:
    v = _float(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative, got {text!r}")
    return v


def positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text!r}")
    return v


def grid_size(text: str) -> int:
    v = positive_int(text)
    if v < 8 or v & (v - 1):
        raise argparse.ArgumentTypeError(f"must be a power of two >= 8, got {text!r}")
    return v


def float_list(kind=positive_float):
    def parse(text: str) -> list[float]:
        items = [s for s in text.split(",") if s.strip()]
        if not items:
            raise argparse.ArgumentTypeError("empty list")
        return [kind(s.strip()) for s in items]
    return parse


def mode_pair(text: str) -> tuple[int, int]:
    try:
        k1, k2 = (int(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two integers 'k1,k2', got {text!r}") from None
    if k1 == 0 and k2 == 0:
        raise argparse.ArgumentTypeError("mode (0,0) is constant")
    return k1, k2


def field_components(text: str) -> dict[tuple[int, int], float]:
    """'01=1,23=0.5' -> {(0, 1): 1.0, (2, 3): 0.5}."""
    out = {}
    for item in text.split(","):
        try:
            key, val = item.split("=")
            key = key.strip()
            mu, nu = int(key[0]), int(key[1])
            if len(key) != 2 or mu == nu:
                raise ValueError
        except (ValueError, IndexError):
            raise argparse.ArgumentTypeError(f"expected entries like '01=1', got {item!r}") from None
        out[(mu, nu)] = _float(val)
    return out


# ---------------------------------------------------------------------------
# output


def _emit_json(obj, out) -> None:
    json.dump(obj, out, allow_nan=False)
    out.write("\n")


def _emit_csv(rows: list[dict], out) -> None:
    w = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)


def emit(rows: list[dict] | dict, fmt: str, out) -> None:
    if fmt == "json":
        _emit_json(rows, out)
    else:
        _emit_csv(rows if isinstance(rows, list) else [rows], out)


# ---------------------------------------------------------------------------
# commands


def cmd_clifford(args) -> list[dict]:
    rows = []
    dims = (2, 4) if args.dim is None else (args.dim,)
    for d in dims:
        sig = clifford.MetricSignature.minkowski(d)
        reps = clifford.REPRESENTATIONS[d] if args.rep is None else (args.rep,)
        for rep in reps:
            if rep not in clifford.REPRESENTATIONS[d]:
                raise ValueError(f"representation {rep!r} not available in D={d}")
            defects = clifford.clifford_defects(sig, rep)
            if args.check != "all":
                if args.check not in defects:
                    raise ValueError(f"unknown identity {args.check!r}; choose from {sorted(defects)}")
                defects = {args.check: defects[args.check]}
            rows += [{"dim": d, "rep": rep, "identity": k, "defect": float(v)}
                     for k, v in defects.items()]
    return rows


def cmd_testfn(args) -> list[dict]:
    f = BumpProfile(args.radius, args.shape)
    x = np.linspace(-args.radius, args.radius, args.sample)
    vals = [f.derivative(x, k) for k in range(3)]
    return [{"x": float(xi), "f": float(a), "df": float(b), "d2f": float(c)}
            for xi, a, b, c in zip(x, *vals)]


def cmd_distext_pair(args) -> dict:
    f = BumpProfile(args.radius, args.shape, args.center)
    w = TaylorWeight(BumpProfile(args.weight_radius or args.radius, args.weight_shape), args.order)
    r = distext.pair_finite_part(distext.PowerSingularity(args.k), f, w, args.tol)
    return {"value": r.value, "error": r.quadrature_error, "order": r.subtraction_order_used}


def cmd_distext_bphz(args) -> list[dict]:
    return [{"cutoff": r.cutoff, "raw": r.raw, "subtracted": r.subtracted, "limit": r.limit}
            for r in distext.bphz_demo(args.m, args.mu, args.cutoffs)]


def cmd_schwinger_rhat(args) -> list[dict]:
    rows = []
    for msq in args.msq_list:
        r = causal2d.rhat_closed(args.ksq, msq)
        rows.append({"msq": msq, "re": r.real, "im": r.imag, "dist_i_over_pi": abs(r - 1j / math.pi)})
    return rows


def cmd_schwinger_mass(args) -> dict:
    r0, rms = causal2d.massless_limit()
    return {"boson_mass_squared": causal2d.boson_mass_squared(args.e),
            "rhat_limit_re": r0.real, "rhat_limit_im": r0.imag, "fit_rms": rms}


def cmd_schwinger_gauge(args) -> list[dict]:
    k = np.array(args.k)
    rows = []
    for cut in args.cutoff_list:
        t = causal2d.naive_cutoff_polarization(k, args.m, cut * np.linalg.norm(k))
        T, L = causal2d.euclidean_decomposition(t, k)
        rows.append({"cutoff_over_k": cut, "longitudinal_defect": causal2d.longitudinal_defect(t, k),
                     "transverse": T, "longitudinal": L})
    return rows


def cmd_anomaly(args) -> dict:
    if any(max(idx) >= args.dim for idx in args.F):
        raise UsageError("--F", f"indices must be below --dim {args.dim}")
    F = anomaly.FieldStrength.from_components(args.dim, args.F)
    reg = anomaly.RegulatorProfile.of(args.profile, args.scale)
    r = anomaly.anomaly_density(F, args.e, reg, args.rep)
    return {"radial_integral": r.radial_integral, "trace_factor": r.trace_factor,
            "density": r.density, "coefficient": r.coefficient}


def _check_smear_radius(args) -> None:
    a = 1.0 / args.n
    if not 2 * a <= args.radius <= args.n * a / 4:
        raise UsageError("--radius", f"must lie in [2/n, 1/4] = [{2 * a}, 0.25] for --n {args.n}")


def cmd_smear_covariance(args) -> dict:
    _check_smear_radius(args)
    rng = np.random.default_rng(args.seed)
    g = smear2d.Grid2(args.n)
    rho = BumpProfile(args.radius)
    worst = 0.0
    for _ in range(args.trials):
        psi = smear2d.LatticeSpinor.random(g, rng)
        A = smear2d.LatticeGauge.random(g, rng)
        lam = smear2d.smooth_random_field(g, rng)
        x = tuple(int(v) for v in rng.integers(0, g.n, 2))
        worst = max(worst, smear2d.covariance_check(psi, A, lam, rho, x, args.e, args.gradient))
    return {"defect": worst, "n": args.n, "radius": args.radius}


def cmd_smear_bosonization(args) -> dict:
    _check_smear_radius(args)
    rng = np.random.default_rng(args.seed)
    g = smear2d.Grid2(args.n)
    phi = smear2d.mode_potential(g, args.mode, args.amplitude)
    psi = smear2d.LatticeSpinor.random(g, rng)
    x = tuple(int(v) for v in rng.integers(0, g.n, 2))
    r = smear2d.bosonization_check(phi, psi, BumpProfile(args.radius), x, args.e, args.rep, args.sign)
    return {"defect": r.defect, "sign_s": r.sign}


def cmd_verify(args) -> list[dict]:
    results = acceptance.run_all(args.suite, args.seed)
    rows = []
    for r in results:
        row = {"check": r.name, "status": "PASS" if r.passed else "FAIL", "detail": r.detail}
        if args.timing:
            row["seconds"] = round(r.seconds, 3)
            row["budget"] = r.budget
        rows.append(row)
    args.failed = any(not r.passed for r in results)
    return rows


# ---------------------------------------------------------------------------
# parser


def _fmt(p: argparse.ArgumentParser, default: str) -> None:
    p.add_argument("--format", choices=("csv", "json"), default=default)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="causalreg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("clifford", help="gamma-matrix identity defects")
    p.add_argument("--check", default="all")
    p.add_argument("--dim", type=int, choices=(2, 4))
    p.add_argument("--rep")
    _fmt(p, "csv")
    p.set_defaults(func=cmd_clifford)

    p = sub.add_parser("testfn", help="sample a test-function profile")
    p.add_argument("--shape", choices=SHAPES, default="bump")
    p.add_argument("--radius", type=positive_float, default=1.0)
    p.add_argument("--sample", type=positive_int, default=11)
    _fmt(p, "csv")
    p.set_defaults(func=cmd_testfn)

    p = sub.add_parser("distext", help="finite-part pairing and BPHZ toy")
    dsub = p.add_subparsers(dest="action", required=True)
    q = dsub.add_parser("pair")
    q.add_argument("--k", type=positive_int, default=2)
    q.add_argument("--order", type=int, default=1)
    q.add_argument("--shape", choices=SHAPES, default="bump")
    q.add_argument("--radius", type=positive_float, default=1.0)
    q.add_argument("--center", type=_float, default=0.0)
    q.add_argument("--weight-shape", choices=SHAPES, default="flattop")
    q.add_argument("--weight-radius", type=positive_float)
    q.add_argument("--tol", type=positive_float, default=distext.DEFAULT_TOL)
    _fmt(q, "json")
    q.set_defaults(func=cmd_distext_pair)
    q = dsub.add_parser("bphz")
    q.add_argument("--m", type=positive_float, default=1.0)
    q.add_argument("--mu", type=positive_float, default=2.0)
    q.add_argument("--cutoffs", type=float_list(), default=[1e2, 1e4, 1e6])
    _fmt(q, "csv")
    q.set_defaults(func=cmd_distext_bphz)

    p = sub.add_parser("schwinger", help="causal 2D vacuum polarization")
    ssub = p.add_subparsers(dest="action", required=True)
    q = ssub.add_parser("rhat")
    q.add_argument("--ksq", type=positive_float, default=1.0)
    q.add_argument("--msq-list", type=float_list(nonnegative_float), default=[1e-2, 1e-4, 1e-6])
    _fmt(q, "csv")
    q.set_defaults(func=cmd_schwinger_rhat)
    q = ssub.add_parser("mass")
    q.add_argument("--e", type=positive_float, default=1.0)
    _fmt(q, "json")
    q.set_defaults(func=cmd_schwinger_mass)
    q = ssub.add_parser("gauge-check")
    q.add_argument("--cutoff-list", type=float_list(), default=[10.0, 100.0, 1000.0],
                   help="cutoffs in units of |k|")
    q.add_argument("--k", type=float_list(_float), default=[0.6, 0.8],
                   help="Euclidean momentum 'k1,k2'")
    q.add_argument("--m", type=nonnegative_float, default=0.3)
    _fmt(q, "csv")
    q.set_defaults(func=cmd_schwinger_gauge)

    p = sub.add_parser("anomaly", help="test-function regulated anomaly density")
    p.add_argument("--dim", type=int, choices=(2, 4), default=4)
    p.add_argument("--profile", choices=SHAPES, default="bump")
    p.add_argument("--scale", type=positive_float, default=1.0)
    p.add_argument("--F", type=field_components, default={(0, 1): 1.0})
    p.add_argument("--e", type=positive_float, default=1.0)
    p.add_argument("--rep")
    _fmt(p, "json")
    p.set_defaults(func=cmd_anomaly)

    p = sub.add_parser("smear", help="lattice smearing checks")
    msub = p.add_subparsers(dest="action", required=True)
    for name, func in (("covariance", cmd_smear_covariance), ("bosonization", cmd_smear_bosonization)):
        q = msub.add_parser(name)
        q.add_argument("--n", type=grid_size, default=64)
        q.add_argument("--seed", type=int, default=7)
        q.add_argument("--radius", type=positive_float, default=0.2)
        q.add_argument("--e", type=positive_float, default=1.0)
        _fmt(q, "json")
        q.set_defaults(func=func)
        if name == "covariance":
            q.add_argument("--trials", type=positive_int, default=1)
            q.add_argument("--gradient", choices=("forward", "backward"), default="forward")
        else:
            q.add_argument("--mode", type=mode_pair, default=(3, 1))
            q.add_argument("--amplitude", type=_float, default=0.5)
            q.add_argument("--rep")
            q.add_argument("--sign", type=int, choices=(-1, 1))

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("--suite", choices=tuple(acceptance.SUITES), default="all")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="include runtimes (output no longer reproducible)")
    _fmt(p, "csv")
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = args.func(args)
    except UsageError as exc:
        print(f"causalreg {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError) as exc:
        print(f"causalreg {args.command}: error: {exc}", file=sys.stderr)
        return 1
    emit(result, args.format, out)
    return 1 if getattr(args, "failed", False) else 0


def main() -> None:
    sys.exit(run())
