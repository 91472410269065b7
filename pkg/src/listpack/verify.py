"""Self-check suites: closed forms against oracles, reductions, continuity, simulation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import awgn_exponents as aw
from . import bounds as bd
from . import geometry as geo
from . import montecarlo as mc
from . import poltyrev_exponents as pe
from .numerics import SeedSpec, q_function
from .oracles import brute_force_ball

SUITES = ("bounds", "exponents", "geometry", "montecarlo")


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    passed: bool
    max_dev: float
    tol: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.suite}/{self.name}  max_dev={self.max_dev:.3e}  tol={self.tol:.1e}"


def _rel(a, b, floor=1e-12):
    return abs(a - b) / max(abs(b), floor)


def _check(suite, name, devs, tol):
    dev = float(max(devs)) if len(devs) else 0.0
    return Check(suite, name, dev <= tol, dev, tol)


def bounds_checks(full: bool) -> list[Check]:
    out = []
    out.append(_check("bounds", "plotkin_zero",
                      [abs(bd.lb_capacity_bounded(bd.PackingParams(1.0, (L - 1) / L, L)))
                       for L in range(2, 11)], 1e-12))
    viol = []
    for L in range(2, 11):
        for r in np.linspace(0.01, (L - 1) / L - 0.01, 200 if full else 50):
            p = bd.PackingParams(1.0, float(r), L)
            viol.append(max(bd.lb_capacity_bounded(p) - bd.ub_capacity_bounded(p), 0.0))
            viol.append(max(bd.lb_capacity_unbounded(float(r), L)
                            - bd.ub_capacity_unbounded(float(r), L), 0.0))
    out.append(_check("bounds", "lb_le_ub", viol, 0.0))
    devs = []
    for L in (2, 3, 5, 8):
        for r in np.linspace(0.05, (L - 1) / L - 0.05, 20):
            p = bd.PackingParams(1.0, float(r), L)
            dp = bd.derivation_params(p)
            devs.append(abs(bd.rate_from_t(1 - 2 * p.P * dp.s, L) - dp.rate))
    out.append(_check("bounds", "derivation_chain", devs, 1e-12))
    scaled = []
    for L in (10, 30, 100, 300, 1000):
        gap = bd.cap_ld_unbounded(0.01) - bd.lb_capacity_unbounded(0.01, L)
        scaled.append(gap * L / math.log(L))
    out.append(_check("bounds", "gap_band_factor", [max(scaled) / min(scaled)], 3.0))
    return out


def exponents_checks(full: bool) -> list[Check]:
    out = []
    snr = 1.0
    Rs = np.linspace(0, aw.capacity(snr), 400)
    devs = [abs(aw.exponent_lower_bound(aw.SnrRate(snr, float(R)), 2).value
                - aw.gallager_exponent(snr, float(R))) for R in Rs]
    out.append(_check("exponents", "gallager_reduction", devs, 1e-10))
    alphas = np.linspace(1, 4, 400)
    devs = [abs(pe.exponent_lower_bound_unbdd(pe.AlphaL(float(a), 2)).value
                - pe.poltyrev_exponent(float(a))) for a in alphas]
    out.append(_check("exponents", "poltyrev_reduction", devs, 1e-10))

    snrs = (0.5, 1.0, 2.0, 4.0) if full else (1.0,)
    Ls = (2, 3, 5) if full else (2, 3)
    per = 20 if full else 4
    devs = []
    for s in snrs:
        for L in Ls:
            rx, rc, C = aw.r_x(s, L), aw.r_crit(s, L), aw.capacity(s)
            for lo, hi, kind in ((0.0, rx, "ex"), (rx, rc, "sl"), (rc, C, "r")):
                for k in range(1, per + 1):
                    R = lo + (hi - lo) * k / (per + 1)
                    sr = aw.SnrRate(s, R)
                    ref = aw.exponent_lower_bound(sr, L).value
                    got = aw.expurg_oracle(sr, L)[0] if kind == "ex" else aw.rce_oracle(sr, L)[0]
                    devs.append(_rel(got, ref))
    out.append(_check("exponents", "constrained_oracle", devs, 1e-5))

    devs = []
    for L in (2, 3, 5):
        for a in np.linspace(math.sqrt(2 * L) + 0.1, 4 * math.sqrt(L), 10 if full else 3):
            al = pe.AlphaL(float(a), L)
            devs.append(abs(pe.numeric_exe_oracle(al) - pe.e_ex_unbdd(al)))
    out.append(_check("exponents", "unconstrained_oracle", devs, 1e-5))

    devs = []
    for s in (0.5, 1.0, 2.0, 4.0):
        for L in (2, 3, 5):
            rx, rc = aw.r_x(s, L), aw.r_crit(s, L)
            devs.append(abs(aw.e_ex(aw.SnrRate(s, rx), L) - aw.e_sl(aw.SnrRate(s, rx), L)))
            devs.append(abs(aw.e_r(aw.SnrRate(s, rc)) - aw.e_sl(aw.SnrRate(s, rc), L)))
    out.append(_check("exponents", "constrained_continuity", devs, 1e-7))
    devs = []
    for L in (2, 3, 5, 8):
        low, high = pe.AlphaL(math.sqrt(L), L), pe.AlphaL(math.sqrt(2 * L), L)
        devs.append(abs(pe.gaussian_norm_density_exponent(low.alpha) - pe.e_sl_unbdd(low)))
        devs.append(abs(pe.e_sl_unbdd(high) - pe.e_ex_unbdd(high)))
        _, acrit = bd.sigma_crit_unbounded(0.0, L)
        devs.append(abs(pe.exponent_lower_bound_unbdd(pe.AlphaL(acrit, L)).value - (L - 1) / 2))
    out.append(_check("exponents", "unconstrained_continuity", devs, 1e-8))
    devs = [abs(aw.e_r(aw.SnrRate(s, aw.capacity(s)))) for s in (0.25, 0.5, 1, 2, 4, 8)]
    devs.append(abs(pe.e_r_unbdd(pe.AlphaL(1.0, 3))))
    out.append(_check("exponents", "capacity_zeros", devs, 1e-10))
    return out


def geometry_checks(full: bool) -> list[Check]:
    out = []
    rng = np.random.default_rng(20240101)
    devs = []
    for _ in range(1000 if full else 200):
        m, n = int(rng.integers(1, 7)), int(rng.integers(1, 9))
        X = rng.standard_normal((m, n))
        devs.append(abs(geo.chebyshev_ball(X).radius_sq - brute_force_ball(X)))
    out.append(_check("geometry", "miniball_vs_bruteforce", devs, 1e-9))
    tri = np.array([[0.0, 0.0], [3.0, 0.0], [1.0, 0.1]])
    out.append(_check("geometry", "obtuse_half_longest_edge",
                      [abs(geo.chebyshev_ball(tri).radius_sq - 2.25)], 1e-12))
    lists, per = (100, 10**4) if full else (10, 10**3)
    violations = 0
    for _ in range(lists):
        violations += cone_violations(rng, int(rng.integers(3, 6)), per)
    out.append(_check("geometry", "cone_in_voronoi_violations", [violations], 0))
    return out


def sample_cone(rng, apex, axis, half_angle, reach, count):
    """Points of the cone other than its apex, up to distance reach."""
    d = axis.size
    w = rng.standard_normal((count, d))
    w -= np.outer(w @ axis, axis)
    w /= np.linalg.norm(w, axis=1, keepdims=True)
    theta = half_angle * rng.random(count)
    t = reach * (1.0 - rng.random(count))
    return apex + t[:, None] * (np.cos(theta)[:, None] * axis + np.sin(theta)[:, None] * w)


def cone_violations(rng, L: int, count: int) -> int:
    X = rng.standard_normal((L, L - 1))
    ball = geo.chebyshev_ball(X)
    v = ball.support[0]
    apex, axis, half = geo.cone_for_list(X, v)
    others = [i for i in range(L) if i != v]
    bad = 0
    for y in sample_cone(rng, apex, axis, half, 5 * ball.radius, count):
        if geo.cone_member(y, apex, axis, half) and not geo.order_voronoi_member(y, X, others):
            bad += 1
    return bad


def montecarlo_checks(full: bool) -> list[Check]:
    out = []
    trials = 10**5 if full else 2 * 10**4
    zs = []
    for d, sigma in ((2.0, 1.0), (3.0, 1.0), (2.0, 0.7)):
        est = mc.estimate_error_prob(np.array([[0.0], [d]]), sigma, 1, trials, SeedSpec(11))
        zs.append(abs(est.p_hat - q_function(d / (2 * sigma))) / est.stderr)
    out.append(_check("montecarlo", "two_point_vs_q_stderrs", zs, 3.0))
    trials = 10**6 if full else 10**5
    est = mc.estimate_shell_probability(400, 1.0, 1.0, trials, SeedSpec(12))
    z = abs(est.p_hat - mc.shell_probability_target(400, 1.0, 1.0)) / est.stderr
    out.append(_check("montecarlo", "shell_probability_stderrs", [z], 3.0))
    return out


REGISTRY: dict[str, Callable[[bool], list[Check]]] = {
    "bounds": bounds_checks,
    "exponents": exponents_checks,
    "geometry": geometry_checks,
    "montecarlo": montecarlo_checks,
}


def run(suite: str = "all", budget: str = "fast") -> list[Check]:
    names = SUITES if suite == "all" else (suite,)
    full = budget == "full"
    results = []
    for name in names:
        results.extend(REGISTRY[name](full))
    return results
