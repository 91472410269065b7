"""Independent reference computations used by the verification suite."""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np
from scipy import stats


def brute_force_ball(X) -> float:
    """Squared radius of the smallest enclosing ball by exhaustive circumsphere search.

    Every subset of at most dim + 1 points gives a candidate: the ball with
    those points on its boundary and center in their affine hull. The answer
    is the smallest candidate containing all points.
    """
    X = np.asarray(X, dtype=float)
    m, n = X.shape
    best = math.inf
    scale = max(float(np.max(np.sum((X - X[0]) ** 2, axis=1))), 1.0)
    for k in range(1, min(m, n + 1) + 1):
        for sub in combinations(range(m), k):
            B = X[list(sub)]
            b0 = B[0]
            if k == 1:
                c = b0
            else:
                V = B[1:] - b0
                G = V @ V.T
                if np.linalg.matrix_rank(G, tol=1e-10 * max(np.abs(G).max(), 1e-300)) < k - 1:
                    continue
                c = b0 + np.linalg.solve(G, 0.5 * np.sum(V * V, axis=1)) @ V
            r2 = float(np.sum((c - b0) ** 2))
            if r2 < best and np.all(np.sum((X - c) ** 2, axis=1) <= r2 + 1e-10 * scale):
                best = r2
    return best


def exact_list_error_prob(points, sigma: float) -> float:
    """Average probability that the sent point is the farthest of the list from y.

    For a list of L points used as a codebook with an (L-1)-list decoder, the
    sent point x_c is dropped iff <z, u_j> > |x_j - x_c| / 2 for every other
    x_j (u_j the unit vector toward x_j). That is an (L-1)-variate normal
    orthant probability.
    """
    X = np.asarray(points, dtype=float)
    L = X.shape[0]
    total = 0.0
    for c in range(L):
        D = np.delete(X, c, axis=0) - X[c]
        dist = np.linalg.norm(D, axis=1)
        U = D / dist[:, None]
        thr = dist / (2 * sigma)
        if L == 2:
            total += float(stats.norm.sf(thr[0]))
            continue
        cov = U @ U.T
        # P[U g > thr] = P[-U g < -thr]
        total += float(stats.multivariate_normal.cdf(-thr, mean=np.zeros(L - 1), cov=cov,
                                                     allow_singular=True, maxpts=10**7,
                                                     abseps=1e-12, releps=1e-10))
    return total / L


def poisson_gof_pvalue(counts, mean: float, min_expected: float = 5.0) -> float:
    """Chi-square goodness-of-fit p-value of integer counts against Poisson(mean)."""
    counts = np.asarray(counts, dtype=np.int64)
    n = counts.size
    kmax = int(counts.max())
    pmf = stats.poisson.pmf(np.arange(kmax + 1), mean)
    # pool tails so every cell has enough expected mass
    lo = 0
    while stats.poisson.cdf(lo, mean) * n < min_expected:
        lo += 1
    hi = int(stats.poisson.isf(min_expected / n, mean))
    hi = max(hi, lo + 1)
    edges = list(range(lo, hi + 1))
    obs, exp = [], []
    obs.append(int(np.sum(counts <= lo)))
    exp.append(float(stats.poisson.cdf(lo, mean)) * n)
    for k in edges[1:]:
        obs.append(int(np.sum(counts == k)))
        exp.append(float(pmf[k]) * n if k <= kmax else float(stats.poisson.pmf(k, mean)) * n)
    obs.append(int(np.sum(counts > hi)))
    exp.append(float(stats.poisson.sf(hi, mean)) * n)
    obs, exp = np.array(obs, float), np.array(exp, float)
    keep = exp > 0
    chi2 = float(np.sum((obs[keep] - exp[keep]) ** 2 / exp[keep]))
    return float(stats.chi2.sf(chi2, keep.sum() - 1))
