"""Random ensembles and channel simulation.

Every trial owns one random stream: trial i draws from
``SeedSpec(seed, i)``, so estimates depend only on (inputs, seed) and never
on how trials are split across worker threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .errors import DomainError, InsufficientErrors, WindowTooLarge
from .geometry import PointSet, chebyshev_ball
from .numerics import SeedSpec, StreamFactory
from .poltyrev_exponents import ball_log_volume

CHUNK = 4096
MIN_ERRORS = 50
TILE_LIMIT = 10**7


@dataclass(frozen=True)
class Codebook:
    points: np.ndarray
    power_constraint: float | None = None

    def __init__(self, points, power_constraint=None):
        arr = np.array(points, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2 or arr.shape[0] < 1:
            raise DomainError("codebook must be a nonempty (M, n) array")
        if not np.all(np.isfinite(arr)):
            raise DomainError("non-finite codeword coordinate")
        if power_constraint is not None:
            limit = math.sqrt(arr.shape[1] * power_constraint) * (1 + 1e-9)
            if np.any(np.linalg.norm(arr, axis=1) > limit):
                raise DomainError("codeword violates the power constraint")
        arr.setflags(write=False)
        object.__setattr__(self, "points", arr)
        object.__setattr__(self, "power_constraint", power_constraint)

    @property
    def M(self) -> int:
        return self.points.shape[0]

    @property
    def n(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class SimEstimate:
    trials: int
    errors: int
    p_hat: float
    stderr: float
    log_p_hat: float | None
    seed: SeedSpec

    @classmethod
    def from_counts(cls, trials: int, errors: int, seed: SeedSpec) -> "SimEstimate":
        p = errors / trials
        return cls(trials, errors, p, math.sqrt(p * (1 - p) / trials),
                   math.log(p) if errors > 0 else None, seed)


@dataclass(frozen=True)
class PppConfig:
    intensity: float
    lo: tuple
    hi: tuple
    exclusion_radius: float | None = None

    def __post_init__(self):
        lo, hi = np.asarray(self.lo, dtype=float), np.asarray(self.hi, dtype=float)
        if lo.shape != hi.shape or lo.ndim != 1 or lo.size < 1:
            raise DomainError("box corners must be vectors of equal length")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi)) and np.all(hi > lo)):
            raise DomainError("box must have finite positive volume")
        if not self.intensity > 0:
            raise DomainError("intensity must be positive")
        if self.exclusion_radius is not None and not self.exclusion_radius > 0:
            raise DomainError("exclusion radius must be positive")

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def volume(self) -> float:
        return float(np.prod(np.asarray(self.hi, float) - np.asarray(self.lo, float)))


def _seed(seed) -> SeedSpec:
    return seed if isinstance(seed, SeedSpec) else SeedSpec(int(seed))


def _run_chunks(work, trials: int, threads: int):
    """Apply work(start, stop) to fixed chunks and return the results in order."""
    bounds = [(s, min(s + CHUNK, trials)) for s in range(0, trials, CHUNK)]
    if threads <= 1 or len(bounds) == 1:
        return [work(a, b) for a, b in bounds]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda ab: work(*ab), bounds))


def sample_spherical_code(n: int, M: int, P: float, seed) -> Codebook:
    if n < 1 or M < 1 or not P > 0:
        raise DomainError("need n, M >= 1 and P > 0")
    g = _seed(seed).generator()
    G = g.standard_normal((M, n))
    norms = np.linalg.norm(G, axis=1, keepdims=True)
    return Codebook(G / norms * math.sqrt(n * P), power_constraint=P)


def ml_list_decode(code, y, list_size: int) -> tuple:
    """Indices of the list_size nearest codewords; ties go to the lower index."""
    X = code.points if isinstance(code, Codebook) else np.asarray(code, dtype=float)
    if not 1 <= list_size < X.shape[0]:
        raise DomainError("need 1 <= list_size < M")
    d2 = np.sum((X - np.asarray(y, dtype=float)) ** 2, axis=1)
    return tuple(sorted(int(i) for i in np.argsort(d2, kind="stable")[:list_size]))


def _decode_errors(X, gram_diff, sent, noise, list_size):
    """Error flags for a batch: sent[b] is transmitted, y = X[sent] + noise[b].

    The comparison uses ||y - x_j||^2 - ||y - x_c||^2 = ||x_j - x_c||^2 - 2<z, x_j - x_c>,
    which is exactly zero at j = c.
    """
    G = noise @ X.T
    Gc = G[np.arange(len(sent)), sent][:, None]
    delta = gram_diff[sent] - 2.0 * (G - Gc)
    idx = np.arange(X.shape[0])[None, :]
    ahead = (delta < 0) | ((delta == 0) & (idx < sent[:, None]))
    return ahead.sum(axis=1) >= list_size


def per_word_errors(code, sigma: float, list_size: int, trials: int, seed, threads: int = 1):
    """Per-codeword (errors, uses) arrays for ML list decoding over AWGN."""
    X = code.points if isinstance(code, Codebook) else np.asarray(code, dtype=float)
    M, n = X.shape
    if trials < 1 or not sigma > 0:
        raise DomainError("need trials >= 1 and sigma > 0")
    if not 1 <= list_size < M:
        raise DomainError("need 1 <= list_size < M")
    sd = _seed(seed)
    sq = np.sum(X * X, axis=1)
    gram_diff = sq[None, :] + sq[:, None] - 2.0 * (X @ X.T)
    # rounding leaves +-1e-16 on the diagonal, enough to make x_c beat itself
    np.fill_diagonal(gram_diff, 0.0)
    round_robin = trials >= M

    def work(start, stop):
        streams = StreamFactory(sd.master_seed)
        sent = np.empty(stop - start, dtype=np.int64)
        noise = np.empty((stop - start, n))
        for k, i in enumerate(range(start, stop)):
            g = streams(i)
            sent[k] = i % M if round_robin else g.integers(M)
            noise[k] = g.standard_normal(n)
        noise *= sigma
        err = _decode_errors(X, gram_diff, sent, noise, list_size)
        return (np.bincount(sent[err], minlength=M), np.bincount(sent, minlength=M))

    errs, uses = np.zeros(M, dtype=np.int64), np.zeros(M, dtype=np.int64)
    for e, u in _run_chunks(work, trials, threads):
        errs += e
        uses += u
    return errs, uses


def estimate_error_prob(code, sigma: float, list_size: int, trials: int, seed,
                        threads: int = 1) -> SimEstimate:
    errs, _ = per_word_errors(code, sigma, list_size, trials, seed, threads)
    return SimEstimate.from_counts(trials, int(errs.sum()), _seed(seed))


def estimate_list_identity(points, sigma: float, trials: int, seed, threads: int = 1):
    """Error probability of a list used as its own codebook, against exp(-rad^2/(2 sigma^2)).

    Returns (estimate, ratio) with ratio = -ln p_hat / (rad^2 / (2 sigma^2)).
    """
    X = points.points if isinstance(points, (PointSet, Codebook)) else np.asarray(points, float)
    L = X.shape[0]
    if L < 2:
        raise DomainError("a list needs at least two points")
    est = estimate_error_prob(X, sigma, L - 1, trials, seed, threads)
    if est.errors < MIN_ERRORS:
        raise InsufficientErrors(f"only {est.errors} errors in {trials} trials", est)
    exponent = chebyshev_ball(X).radius_sq / (2 * sigma * sigma)
    return est, -est.log_p_hat / exponent


def expurgate_half_indices(per_word_error) -> np.ndarray:
    e = np.asarray(per_word_error, dtype=float)
    keep = np.argsort(e, kind="stable")[: (len(e) + 1) // 2]
    return np.sort(keep)


def expurgate_half(code: Codebook, per_word_error) -> Codebook:
    if len(per_word_error) != code.M:
        raise DomainError("need one error value per codeword")
    keep = expurgate_half_indices(per_word_error)
    return Codebook(code.points[keep], code.power_constraint)


def sample_ppp(cfg: PppConfig, seed) -> PointSet:
    g = _seed(seed).generator()
    lo, hi = np.asarray(cfg.lo, float), np.asarray(cfg.hi, float)
    count = g.poisson(cfg.intensity * cfg.volume)
    return PointSet(lo + (hi - lo) * g.random((count, cfg.dim)))


def sample_matern(cfg: PppConfig, seed) -> PointSet:
    """PPP with every point that has a neighbor within the exclusion radius removed."""
    if cfg.exclusion_radius is None:
        raise DomainError("Matern sampling needs an exclusion radius")
    X = sample_ppp(cfg, seed).points
    if X.shape[0] < 2:
        return PointSet(X)
    pairs = cKDTree(X).query_pairs(cfg.exclusion_radius, output_type="ndarray")
    drop = np.zeros(X.shape[0], dtype=bool)
    drop[pairs.ravel()] = True
    return PointSet(X[~drop])


def matern_intensity(intensity: float, radius: float, dim: int) -> float:
    return intensity * math.exp(-intensity * math.exp(ball_log_volume(dim, radius)))


def ppp_counts(cfg: PppConfig, draws: int, master_seed: int, threads: int = 1):
    """Point counts of independent draws (draw i uses stream i).

    With an exclusion radius the draws are Matern and a second array counts the
    points inside the window eroded by that radius, where edge effects vanish.
    """
    r = cfg.exclusion_radius
    lo = np.asarray(cfg.lo, float) + (r or 0.0)
    hi = np.asarray(cfg.hi, float) - (r or 0.0)

    def work(start, stop):
        c, inner = [], []
        for i in range(start, stop):
            sd = SeedSpec(master_seed, i)
            pts = (sample_matern(cfg, sd) if r is not None else sample_ppp(cfg, sd)).points
            c.append(len(pts))
            if r is not None:
                inner.append(int(np.sum(np.all((pts >= lo) & (pts <= hi), axis=1))))
        return c, inner

    counts, inner = [], []
    for c, i in _run_chunks(work, draws, threads):
        counts.extend(c)
        inner.extend(i)
    return np.array(counts, dtype=np.int64), np.array(inner, dtype=np.int64)


def tile_constellation(base, a: float, inflation: float, window) -> PointSet:
    """All points of base + a(1 + inflation) Z^n inside the window (lo, hi)."""
    B = base.points if isinstance(base, (Codebook, PointSet)) else np.asarray(base, float)
    if B.ndim == 1:
        B = B[:, None]
    if not a > 0 or inflation < 0:
        raise DomainError("need a > 0 and inflation >= 0")
    if np.any(np.abs(B) > a / 2 * (1 + 1e-12)):
        raise DomainError("base points must lie in [-a/2, a/2]^n")
    lo, hi = (np.asarray(w, float) for w in window)
    step = a * (1 + inflation)
    kmin = np.ceil((lo[None, :] - B) / step - 1e-12).astype(np.int64)
    kmax = np.floor((hi[None, :] - B) / step + 1e-12).astype(np.int64)
    counts = np.clip(kmax - kmin + 1, 0, None)
    total = int(np.sum(np.prod(counts.astype(float), axis=1)))
    if total > TILE_LIMIT:
        raise WindowTooLarge(f"window holds {total} points, limit {TILE_LIMIT}")
    out = []
    for b, k0, k1 in zip(B, kmin, kmax):
        if np.any(k1 < k0):
            continue
        axes = [np.arange(p, q + 1) for p, q in zip(k0, k1)]
        K = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(axes))
        P = b + step * K
        inside = np.all((P >= lo) & (P <= hi), axis=1)
        out.append(P[inside])
    pts = np.concatenate(out) if out else np.zeros((0, B.shape[1]))
    return PointSet(pts)


def estimate_shell_probability(n: int, P: float, delta: float, trials: int, seed,
                               threads: int = 1) -> SimEstimate:
    """Frequency of sum x_i^2 - nP landing in [-delta, 0] for i.i.d. N(0, P) coordinates."""
    if not (n >= 1 and P > 0 and delta > 0 and trials >= 1):
        raise DomainError("need n, trials >= 1 and P, delta > 0")
    sd = _seed(seed)
    sdev = math.sqrt(P)

    def work(start, stop):
        streams = StreamFactory(sd.master_seed)
        hits = 0
        for i in range(start, stop):
            x = streams(i).standard_normal(n) * sdev
            dev = float(x @ x) - n * P
            hits += -delta <= dev <= 0
        return hits

    errors = sum(_run_chunks(work, trials, threads))
    return SimEstimate.from_counts(trials, errors, sd)


def shell_probability_target(n: int, P: float, delta: float) -> float:
    return delta / (2 * P * math.sqrt(math.pi * n))
