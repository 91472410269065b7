"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line (printed in the pytest terminal summary
under "acceptance criteria") before asserting. Run this file alone with
``pytest tests/test_acceptance.py``.
"""

import functools
import json
import math
import time

import numpy as np
import pytest

from listpack import awgn_exponents as aw
from listpack import bounds as bd
from listpack import cli
from listpack import dmc_exponents as dm
from listpack import geometry as geo
from listpack import montecarlo as mc
from listpack import poltyrev_exponents as pe
from listpack.numerics import SeedSpec, q_function
from listpack.oracles import brute_force_ball, exact_list_error_prob, poisson_gof_pvalue
from listpack.verify import cone_violations


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def test_c01_plotkin_zero(report):
    with Timer() as t:
        dev = max(abs(bd.lb_capacity_bounded(bd.PackingParams(1.0, (L - 1) / L, L)))
                  for L in range(2, 11))
    ok = dev <= 1e-12 and t.elapsed < 1
    report(1, "plotkin_zero", ok, f"max|lb|={dev:.2e} tol=1e-12 time={t.elapsed:.3f}s")
    assert ok


def test_c02_gallager_reduction(report):
    with Timer() as t:
        Rs = np.linspace(0, 0.5 * math.log(2), 400)
        dev = max(abs(aw.exponent_lower_bound(aw.SnrRate(1.0, float(R)), 2).value
                      - aw.gallager_exponent(1.0, float(R))) for R in Rs)
    ok = dev <= 1e-10 and t.elapsed < 1
    report(2, "gallager_L2_reduction", ok, f"max_dev={dev:.2e} tol=1e-10 time={t.elapsed:.3f}s")
    assert ok


def test_c03_poltyrev_reduction(report):
    with Timer() as t:
        dev = max(abs(pe.exponent_lower_bound_unbdd(pe.AlphaL(float(a), 2)).value
                      - pe.poltyrev_exponent(float(a))) for a in np.linspace(1, 4, 400))
    ok = dev <= 1e-10 and t.elapsed < 1
    report(3, "poltyrev_L2_reduction", ok, f"max_dev={dev:.2e} tol=1e-10 time={t.elapsed:.3f}s")
    assert ok


def test_c04_constrained_oracle(report):
    worst = 0.0
    with Timer() as t:
        for snr in (0.5, 1.0, 2.0, 4.0):
            for L in (2, 3, 5):
                rx, rc, C = aw.r_x(snr, L), aw.r_crit(snr, L), aw.capacity(snr)
                for lo, hi, oracle in ((0.0, rx, aw.expurg_oracle), (rx, rc, aw.rce_oracle),
                                       (rc, C, aw.rce_oracle)):
                    for k in range(1, 21):
                        sr = aw.SnrRate(snr, lo + (hi - lo) * k / 21)
                        ref = aw.exponent_lower_bound(sr, L).value
                        got = oracle(sr, L)[0]
                        worst = max(worst, abs(got - ref) / max(abs(ref), 1e-12))
    ok = worst <= 1e-5 and t.elapsed < 300
    report(4, "constrained_oracle_equivalence", ok,
           f"max_rel_dev={worst:.2e} tol=1e-5 points=720 time={t.elapsed:.1f}s")
    assert ok


def test_c05_unconstrained_oracle(report):
    worst = 0.0
    with Timer() as t:
        for L in (2, 3, 5):
            for a in np.linspace(math.sqrt(2 * L) + 0.1, 4 * math.sqrt(L), 20):
                al = pe.AlphaL(float(a), L)
                worst = max(worst, abs(pe.numeric_exe_oracle(al) - pe.e_ex_unbdd(al)))
    ok = worst <= 1e-5 and t.elapsed < 60
    report(5, "unconstrained_oracle_equivalence", ok,
           f"max_dev={worst:.2e} tol=1e-5 time={t.elapsed:.1f}s")
    assert ok


def test_c06_regime_continuity(report):
    cons, uncons, anchor = 0.0, 0.0, 0.0
    for snr in (0.5, 1.0, 2.0, 4.0):
        for L in (2, 3, 5):
            for b in (aw.r_x(snr, L), aw.r_crit(snr, L)):
                lo = aw.exponent_lower_bound(aw.SnrRate(snr, b * (1 - 1e-12)), L).value
                hi = aw.exponent_lower_bound(aw.SnrRate(snr, b * (1 + 1e-12)), L).value
                cons = max(cons, abs(lo - hi))
    for L in (2, 3, 5, 8):
        for b in (math.sqrt(L), math.sqrt(2 * L)):
            lo = pe.exponent_lower_bound_unbdd(pe.AlphaL(b * (1 - 1e-12), L)).value
            hi = pe.exponent_lower_bound_unbdd(pe.AlphaL(b * (1 + 1e-12), L)).value
            uncons = max(uncons, abs(lo - hi))
        ac = math.sqrt(L ** (L / (L - 1)))
        anchor = max(anchor, abs(pe.exponent_lower_bound_unbdd(pe.AlphaL(ac, L)).value - (L - 1) / 2))
    ok = cons <= 1e-7 and uncons <= 1e-8 and anchor <= 1e-10
    report(6, "regime_continuity", ok,
           f"constrained_jump={cons:.2e}/1e-7 unconstrained_jump={uncons:.2e}/1e-8 "
           f"anchor_dev={anchor:.2e}/1e-10")
    assert ok


def test_c07_capacity_zeros(report):
    dev = max(abs(aw.e_r(aw.SnrRate(s, 0.5 * math.log1p(s)))) for s in (0.25, 0.5, 1, 2, 4, 8))
    unb = [pe.e_r_unbdd(pe.AlphaL(1.0, L)) for L in (2, 3, 5, 10)]
    ok = dev <= 1e-10 and all(v == 0.0 for v in unb)
    report(7, "capacity_zeros", ok, f"max|E_r(C)|={dev:.2e} tol=1e-10 E_r_unbdd(1)={max(unb)}")
    assert ok


def test_c08_bound_ordering_and_convergence(report):
    viol = 0.0
    for L in range(2, 11):
        for r in np.linspace(0.01, (L - 1) / L - 0.01, 200):
            p = bd.PackingParams(1.0, float(r), L)
            viol = max(viol, bd.lb_capacity_bounded(p) - bd.ub_capacity_bounded(p))
        for N in np.geomspace(1e-4, 10, 200):
            viol = max(viol, bd.lb_capacity_unbounded(float(N), L) - bd.ub_capacity_unbounded(float(N), L))
    Ls = np.arange(10, 1001)
    scaled = np.array([(bd.cap_ld_unbounded(0.01) - bd.lb_capacity_unbounded(0.01, int(L))) * L / math.log(L)
                       for L in Ls])
    band = scaled.max() / scaled.min()
    ok = viol <= 0 and band <= 3
    report(8, "bound_ordering_and_gap_scaling", ok,
           f"max(lb-ub)={viol:.2e} gap*L/lnL band={band:.3f} (limit 3)")
    assert ok


def test_c09_geometry_oracle(report):
    rng = np.random.default_rng(909)
    with Timer() as t:
        dev = 0.0
        for _ in range(1000):
            m, n = int(rng.integers(1, 7)), int(rng.integers(1, 9))
            X = rng.standard_normal((m, n)) * rng.uniform(0.1, 10)
            dev = max(dev, abs(geo.chebyshev_ball(X).radius_sq - brute_force_ball(X)))
        obtuse = geo.chebyshev_ball(np.array([[0.0, 0.0], [3.0, 0.0], [1.0, 0.1]])).radius_sq
    ok = dev <= 1e-9 and abs(obtuse - 2.25) <= 1e-12 and t.elapsed < 30
    report(9, "miniball_vs_bruteforce", ok,
           f"max_dev={dev:.2e} tol=1e-9 obtuse_rad2={obtuse!r} time={t.elapsed:.1f}s")
    assert ok


def test_c10_cone_in_voronoi(report):
    rng = np.random.default_rng(1010)
    bad = sum(cone_violations(rng, int(rng.integers(3, 6)), 10_000) for _ in range(100))
    ok = bad == 0
    report(10, "cone_in_voronoi", ok, f"violations={bad} over 100 lists x 10^4 points")
    assert ok


def test_c11_monte_carlo_exactness(report):
    with Timer() as t:
        zs = []
        for d, sigma in ((2.0, 1.0), (3.0, 1.0), (2.0, 0.7)):
            est = mc.estimate_error_prob(np.array([[0.0], [d]]), sigma, 1, 100_000, SeedSpec(1111))
            zs.append(abs(est.p_hat - q_function(d / (2 * sigma))) / est.stderr)
    ok = max(zs) <= 3 and t.elapsed < 60
    report(11, "two_point_vs_Q", ok,
           "z=" + ",".join(f"{z:.2f}" for z in zs) + f" (limit 3) time={t.elapsed:.1f}s")
    assert ok


# Criterion 12: list-radius identity at desk scale.

EXPONENT = 5.0
DIMS = (10, 20, 40)
TRIALS_12 = 10**6


def embedded_triangle(n, seed):
    """Unit-side equilateral triangle placed in a random 2-plane of R^n."""
    tri = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3) / 2]])
    Q, _ = np.linalg.qr(np.random.default_rng(seed).standard_normal((n, 2)))
    return tri @ Q.T


@functools.lru_cache(maxsize=None)
def identity_run(n):
    X = embedded_triangle(n, 1200 + n)
    rad2 = geo.chebyshev_ball(X).radius_sq
    sigma = math.sqrt(rad2 / (2 * EXPONENT))
    est, ratio = mc.estimate_list_identity(X, sigma, TRIALS_12, SeedSpec(1212, 0))
    ratio_se = est.stderr / est.p_hat / EXPONENT
    return X, sigma, est, ratio, ratio_se


@pytest.mark.xfail(strict=True, reason=(
    "unattainable at this scale: for any acute triangle the error event needs the noise to "
    "cross a half-plane at distance rad, so p <= Q(sqrt(2 * 5)) and the ratio is at least 1.41; "
    "the equilateral value is 1.655 exactly, and p does not depend on n (see the supporting test)"))
def test_c12_list_identity_trend(report):
    with Timer() as t:
        runs = [identity_run(n) for n in DIMS]
    ratios = [r[3] for r in runs]
    ses = [r[4] for r in runs]
    in_band = all(0.8 <= r <= 1.3 for r in ratios)
    dist = [abs(r - 1) for r in ratios]
    trend = all(dist[i + 1] <= dist[i] + 2 * math.hypot(ses[i], ses[i + 1]) for i in range(len(dist) - 1))
    ok = in_band and trend and t.elapsed < 600
    report(12, "list_radius_identity_trend", ok,
           " ".join(f"n={n}:ratio={r:.4f}+-{s:.4f}" for n, r, s in zip(DIMS, ratios, ses))
           + f" band=[0.8,1.3] trend={'ok' if trend else 'no'} time={t.elapsed:.1f}s")
    assert ok


def test_c12_supporting_evidence():
    """The simulated error probability is the exact one at every n, and only large exponents reach 1."""
    # three comparisons at fixed seeds, so allow 4 standard errors each
    for n in DIMS:
        X, sigma, est, _, _ = identity_run(n)
        exact = exact_list_error_prob(X, sigma)
        assert abs(est.p_hat - exact) <= 4 * math.sqrt(exact * (1 - exact) / est.trials)
    tri = embedded_triangle(2, 0)
    rad2 = geo.chebyshev_ball(tri).radius_sq
    excess = []
    for E in (5.0, 10.0, 20.0, 40.0, 80.0):
        p = exact_list_error_prob(tri, math.sqrt(rad2 / (2 * E)))
        excess.append(-math.log(p) / E - 1)
    assert excess[0] == pytest.approx(0.655, abs=2e-3)
    assert all(b < a for a, b in zip(excess, excess[1:])) and excess[-1] < 0.1
    # no acute triangle can beat the half-plane bound p <= Q(sqrt(2E))
    assert -math.log(q_function(math.sqrt(2 * EXPONENT))) / EXPONENT > 1.4


def test_c13_point_process_laws(report):
    with Timer() as t:
        cfg = mc.PppConfig(10.0, (0.0, 0.0), (1.0, 1.0))
        counts, _ = mc.ppp_counts(cfg, 10_000, 1313)
        pval = poisson_gof_pvalue(counts, 10.0)
        r = 0.1
        mat = mc.PppConfig(50.0, (0.0, 0.0), (1.0, 1.0), exclusion_radius=r)
        _, inner = mc.ppp_counts(mat, 10_000, 1314)
        area = (1 - 2 * r) ** 2
        est = inner.mean() / area
        se = inner.std(ddof=1) / math.sqrt(inner.size) / area
        target = mc.matern_intensity(50.0, r, 2)
        z = abs(est - target) / se
    ok = pval > 0.01 and z <= 3 and t.elapsed < 120
    report(13, "ppp_and_matern_laws", ok,
           f"poisson_gof_p={pval:.3f} (>0.01) matern={est:.3f} target={target:.3f} z={z:.2f} (limit 3) "
           f"time={t.elapsed:.1f}s")
    assert ok


def test_c14_shell_probability(report):
    with Timer() as t:
        est = mc.estimate_shell_probability(400, 1.0, 1.0, 10**6, SeedSpec(1414))
    target = 1 / (2 * math.sqrt(400 * math.pi))
    z = abs(est.p_hat - target) / est.stderr
    ok = z <= 3 and t.elapsed < 120
    report(14, "shell_probability", ok,
           f"p_hat={est.p_hat:.5f} target={target:.5f} z={z:.2f} (limit 3) time={t.elapsed:.1f}s")
    assert ok


def test_c15_dmc_sanity(report):
    chans = [dm.bsc(0.1), dm.bsc(0.3),
             dm.Dmc([[0.7, 0.2, 0.1], [0.1, 0.8, 0.1], [0.2, 0.2, 0.6]], [0.3, 0.3, 0.4])]
    e0_zero = max(abs(dm.gallager_e0(d, 0.0)) for d in chans)
    e0_useless = max(abs(dm.gallager_e0(dm.bsc(0.5), rho)) for rho in (0.5, 1.0, 2.0))
    e0_clean = abs(dm.gallager_e0(dm.bsc(0.0), 1.0) - math.log(2))
    at_I = 0.0
    for d in chans:
        I = dm.mutual_information(d)
        for L in (2, 3):
            at_I = max(at_I, dm.dmc_random_coding_exponent(d, I, L), dm.dmc_expurgated_exponent(d, I, L))
    ok = e0_zero <= 1e-12 and e0_useless <= 1e-12 and e0_clean <= 1e-12 and at_I <= 1e-6
    report(15, "dmc_sanity", ok,
           f"E0(rho=0)={e0_zero:.1e} E0(BSC .5)={e0_useless:.1e} |E0(BSC 0)-ln2|={e0_clean:.1e} "
           f"max E(I)={at_I:.1e} (tol 1e-6)")
    assert ok


SIM_COMMANDS = [
    ["simulate", "list", "--sigma", "0.8", "--trials", "30000"],
    ["simulate", "code", "--n", "6", "--M", "16", "--L", "3", "--sigma", "0.7", "--trials", "30000"],
    ["simulate", "shell", "--n", "400", "--trials", "30000"],
    ["simulate", "ppp", "--intensity", "40", "--n", "2", "--trials", "6000"],
    ["simulate", "ppp", "--intensity", "40", "--n", "2", "--radius", "0.05", "--trials", "6000"],
]


def test_c16_determinism(report, capsys):
    mismatched = []
    for argv in SIM_COMMANDS:
        outs = []
        for threads in ("1", "2", "4", "1"):
            assert cli.main(argv + ["--seed", "1616", "--threads", threads]) == 0
            outs.append(capsys.readouterr().out.encode())
        json.loads(outs[0])
        if len(set(outs)) != 1:
            mismatched.append(argv[1])
    ok = not mismatched
    report(16, "determinism_across_threads", ok,
           f"commands={len(SIM_COMMANDS)} threads=1,2,4 mismatched={mismatched or 'none'}")
    assert ok


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
