"""Command-line front end.

Curve commands write CSV (header row, 12 significant digits, LF endings).
Simulation commands write one JSON object. Exit status: 0 on success,
1 when verification fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import awgn_exponents as aw
from . import bounds as bd
from . import dmc_exponents as dm
from . import montecarlo as mc
from . import poltyrev_exponents as pe
from . import verify as vf
from .errors import DomainError, InsufficientErrors, ListpackError
from .numerics import SeedSpec, q_function

SCHEMA_VERSION = 1
LN2 = math.log(2.0)


class UsageError(Exception):
    pass


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if not math.isfinite(x):
        return ""
    return f"{x:.12g}"


def write_csv(header, rows, out):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    emit(buf.getvalue(), out)


def emit(text: str, out):
    if out in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _try(f, *args):
    try:
        return f(*args)
    except DomainError:
        return None


def _scale(bits):
    return (lambda v: None if v is None else v / LN2) if bits else (lambda v: v)


def grid(lo, hi, steps):
    if steps < 2:
        raise UsageError("--steps must be at least 2")
    if not hi > lo:
        raise UsageError("range maximum must exceed its minimum")
    return np.linspace(lo, hi, steps)


def cmd_bounds(a):
    L, conv = a.L, _scale(a.bits)
    if a.regime == "bounded":
        P = a.P
        lo = 0.01 if a.nsr_min is None else a.nsr_min
        hi = (L - 1) / L if a.nsr_max is None else a.nsr_max
        if a.N is not None and not 0 < a.N / P <= (L - 1) / L * (1 + 1e-12):
            raise UsageError("bounded regime needs 0 < N/P <= (L-1)/L")
        if lo <= 0 or hi > (L - 1) / L * (1 + 1e-12):
            raise UsageError("bounded regime needs 0 < nsr <= (L-1)/L")
        rows = []
        nsrs = [a.N / P] if a.N is not None else grid(lo, hi, a.steps)
        for r in nsrs:
            p = bd.PackingParams(P, min(float(r), (L - 1) / L) * P, L)
            rows.append([r, conv(_try(bd.lb_capacity_bounded, p)),
                         conv(_try(bd.ub_capacity_bounded, p)),
                         conv(bd.cap_ld_bounded(P, p.N))])
        write_csv(["nsr", "lb", "ub", "cap_ld"], rows, a.out)
    else:
        lo = 0.001 if a.nsr_min is None else a.nsr_min
        hi = 0.1 if a.nsr_max is None else a.nsr_max
        if lo <= 0 or (a.N is not None and a.N <= 0):
            raise UsageError("unbounded regime needs N > 0")
        rows = [[N, conv(bd.lb_capacity_unbounded(float(N), L)),
                 conv(bd.ub_capacity_unbounded(float(N), L)),
                 conv(bd.cap_ld_unbounded(float(N)))]
                for N in ([a.N] if a.N is not None else grid(lo, hi, a.steps))]
        write_csv(["N", "lb", "ub", "cap_ld"], rows, a.out)


def cmd_exponents(a):
    snr, L, conv = a.snr, a.L, _scale(a.bits)
    if not snr > 0:
        raise UsageError("--snr must be positive")
    rc, rx = aw.r_crit(snr, L), aw.r_x(snr, L)
    rows = []
    for R in grid(0.0, aw.capacity(snr), a.steps):
        R = float(R)
        pt = aw.exponent_lower_bound(aw.SnrRate(snr, R), L)
        rows.append([conv(R), conv(pt.value), pt.regime, conv(rc), conv(rx),
                     conv(aw.gallager_exponent(snr, R))])
    write_csv(["R", "E_lower", "regime", "R_crit", "R_x", "E_unique"], rows, a.out)


def cmd_exponents_unbounded(a):
    L, conv = a.L, _scale(a.bits)
    lo = 1.0 if a.alpha_min is None else a.alpha_min
    hi = 4.0 * math.sqrt(L) if a.alpha_max is None else a.alpha_max
    if lo < 1:
        raise UsageError("alpha range must lie in [1, inf)")
    rows = []
    for al in grid(lo, hi, a.steps):
        pt = pe.exponent_lower_bound_unbdd(pe.AlphaL(float(al), L))
        rows.append([al, conv(pt.value), pt.regime, math.sqrt(L), math.sqrt(2 * L),
                     conv(pe.poltyrev_exponent(float(al)))])
    write_csv(["alpha", "E_lower", "regime", "alpha_sl", "alpha_ex", "E_unique"], rows, a.out)


def _read_matrix(path):
    with open(path, newline="") as fh:
        rows = [[float(v) for v in r] for r in csv.reader(fh) if r and not r[0].startswith("#")]
    return np.array(rows)


def cmd_dmc(a):
    if a.matrix is not None:
        W = _read_matrix(a.matrix)
    elif a.bsc is not None:
        W = np.array([[1 - a.bsc, a.bsc], [a.bsc, 1 - a.bsc]])
    else:
        raise UsageError("give --bsc P or --matrix PATH")
    px = None if a.px is None else [float(v) for v in a.px.split(",")]
    try:
        d = dm.Dmc(W, px)
    except DomainError as e:
        raise UsageError(str(e)) from e
    conv = _scale(a.bits)
    I = dm.mutual_information(d)
    hi = I if a.r_max is None else a.r_max
    rows = []
    for R in grid(0.0, hi, a.steps):
        R = float(R)
        rows.append([conv(R), conv(dm.dmc_random_coding_exponent(d, R, a.L)),
                     conv(dm.dmc_expurgated_exponent(d, R, a.L, a.rho_max))])
    write_csv(["R", "E_r", "E_ex"], rows, a.out)


def _json_out(command, params, seed, est=None, derived=None, out=None, trials=None):
    obj = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "params": params,
        "seed": seed,
        "trials": trials if est is None else est.trials,
        "errors": None if est is None else est.errors,
        "p_hat": None if est is None else est.p_hat,
        "stderr": None if est is None else est.stderr,
        "log_p_hat": None if est is None else est.log_p_hat,
        "derived": derived or {},
    }
    emit(json.dumps(obj, indent=2, allow_nan=False) + "\n", out)


def _need(a, *names):
    for n in names:
        if getattr(a, n) is None:
            raise UsageError(f"--{n.replace('_', '-')} is required")


def cmd_simulate(a):
    seed = SeedSpec(a.seed)
    if a.trials < 1:
        raise UsageError("--trials must be positive")
    if a.what == "list":
        _need(a, "sigma")
        if a.points is not None:
            X = _read_matrix(a.points)
            source = a.points
        else:
            X = np.zeros((2, a.n))
            X[1, 0] = a.d
            source = "two-point"
        params = {"points": source, "L": int(X.shape[0]), "n": int(X.shape[1]),
                  "sigma": a.sigma, "trials": a.trials}
        try:
            est, ratio = mc.estimate_list_identity(X, a.sigma, a.trials, seed, a.threads)
        except InsufficientErrors as e:
            est, ratio = e.estimate, None
        derived = {"ratio": ratio}
        if X.shape[0] == 2:
            derived["q_reference"] = q_function(float(np.linalg.norm(X[1] - X[0])) / (2 * a.sigma))
        _json_out("simulate list", params, a.seed, est, derived, a.out)
    elif a.what == "code":
        _need(a, "sigma", "M")
        code = mc.sample_spherical_code(a.n, a.M, a.P, SeedSpec(a.seed, 2**63))
        params = {"n": a.n, "M": a.M, "P": a.P, "L": a.L, "sigma": a.sigma, "trials": a.trials,
                  "rate": bd.rate_of_code(a.M, a.n)}
        est = mc.estimate_error_prob(code, a.sigma, a.L - 1, a.trials, seed, a.threads)
        _json_out("simulate code", params, a.seed, est, {}, a.out)
    elif a.what == "shell":
        params = {"n": a.n, "P": a.P, "delta": a.delta, "trials": a.trials}
        est = mc.estimate_shell_probability(a.n, a.P, a.delta, a.trials, seed, a.threads)
        derived = {"target": mc.shell_probability_target(a.n, a.P, a.delta)}
        _json_out("simulate shell", params, a.seed, est, derived, a.out)
    elif a.what == "ppp":
        _need(a, "intensity")
        dim = a.n
        side = a.side
        cfg = mc.PppConfig(a.intensity, (0.0,) * dim, (side,) * dim, a.radius)
        counts, inner = mc.ppp_counts(cfg, a.trials, a.seed, a.threads)
        params = {"intensity": a.intensity, "dim": dim, "side": side, "radius": a.radius,
                  "trials": a.trials}
        derived = {"mean_count": float(np.mean(counts)),
                   "expected_count": a.intensity * cfg.volume}
        if a.radius is not None:
            area = max(side - 2 * a.radius, 0.0) ** dim
            derived["intensity_estimate"] = float(np.mean(inner)) / area if area > 0 else None
            derived["intensity_target"] = mc.matern_intensity(a.intensity, a.radius, dim)
            derived["expected_count"] = None
        _json_out("simulate ppp", params, a.seed, None, derived, a.out, trials=a.trials)


def cmd_verify(a):
    results = vf.run(a.suite, a.budget)
    for chk in results:
        print(chk.line())
    failed = sum(not c.passed for c in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="listpack", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common_out(sp):
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        sp.add_argument("--bits", action="store_true", help="report rates and exponents in bits")

    b = sub.add_parser("bounds", help="capacity bound curves")
    b.add_argument("--regime", choices=("bounded", "unbounded"), default="bounded")
    b.add_argument("--P", type=float, default=1.0)
    b.add_argument("--L", type=int, required=True)
    b.add_argument("--N", type=float, help="evaluate a single noise level instead of a sweep")
    b.add_argument("--nsr-min", type=float)
    b.add_argument("--nsr-max", type=float)
    b.add_argument("--steps", type=int, default=200)
    common_out(b)
    b.set_defaults(func=cmd_bounds)

    e = sub.add_parser("exponents", help="power-constrained AWGN exponent curve")
    e.add_argument("--snr", type=float, required=True)
    e.add_argument("--L", type=int, required=True)
    e.add_argument("--steps", type=int, default=200)
    common_out(e)
    e.set_defaults(func=cmd_exponents)

    u = sub.add_parser("exponents-unbounded", help="unconstrained AWGN exponent curve")
    u.add_argument("--L", type=int, required=True)
    u.add_argument("--alpha-min", type=float)
    u.add_argument("--alpha-max", type=float)
    u.add_argument("--steps", type=int, default=200)
    common_out(u)
    u.set_defaults(func=cmd_exponents_unbounded)

    d = sub.add_parser("dmc", help="discrete memoryless channel exponents")
    d.add_argument("--bsc", type=float, help="crossover probability of a binary symmetric channel")
    d.add_argument("--matrix", help="CSV file with one row of W(y|x) per input x")
    d.add_argument("--px", help="comma-separated input distribution (default uniform)")
    d.add_argument("--L", type=int, default=2)
    d.add_argument("--r-max", type=float, help="largest rate in nats (default mutual information)")
    d.add_argument("--rho-max", type=float, default=64.0)
    d.add_argument("--steps", type=int, default=100)
    common_out(d)
    d.set_defaults(func=cmd_dmc)

    s = sub.add_parser("simulate", help="Monte Carlo estimates as JSON")
    s.add_argument("what", choices=("list", "code", "shell", "ppp"))
    s.add_argument("--sigma", type=float)
    s.add_argument("--points", help="CSV list/codebook, one point per row (simulate list)")
    s.add_argument("--d", type=float, default=2.0, help="distance of the default two-point code")
    s.add_argument("--n", type=int, default=1, help="dimension")
    s.add_argument("--M", type=int, help="codebook size (simulate code)")
    s.add_argument("--P", type=float, default=1.0)
    s.add_argument("--L", type=int, default=2)
    s.add_argument("--delta", type=float, default=1.0)
    s.add_argument("--intensity", type=float)
    s.add_argument("--side", type=float, default=1.0, help="box side length (simulate ppp)")
    s.add_argument("--radius", type=float, help="exclusion radius; enables Matern thinning")
    s.add_argument("--trials", type=int, default=10**5)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_simulate)

    v = sub.add_parser("verify", help="run the self-check suites")
    v.add_argument("--suite", choices=("all",) + vf.SUITES, default="all")
    v.add_argument("--budget", choices=("fast", "full"), default="fast")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rc = args.func(args)
    except (UsageError, ListpackError) as e:
        parser.error(str(e))
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
