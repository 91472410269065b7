"""Chebyshev radii, list-decoding radii, packing predicates and Voronoi tests."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import DegenerateInput, DomainError, TooLarge

ENUMERATION_LIMIT = 10**7
_RANK_TOL = 1e-12
_INSIDE_RTOL = 1e-12


@dataclass(frozen=True)
class PointSet:
    points: np.ndarray

    def __init__(self, points):
        arr = np.array(points, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2 or arr.shape[1] < 1:
            raise DegenerateInput("points must form a (count, dim) array")
        if not np.all(np.isfinite(arr)):
            raise DegenerateInput("non-finite coordinate")
        arr.setflags(write=False)
        object.__setattr__(self, "points", arr)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class EnclosingBall:
    center: np.ndarray
    radius_sq: float
    support: tuple = field(default_factory=tuple)

    @property
    def radius(self) -> float:
        return math.sqrt(self.radius_sq)


def _as_points(pts) -> np.ndarray:
    return pts.points if isinstance(pts, PointSet) else PointSet(pts).points


def _affine_frame(X: np.ndarray):
    """Origin and orthonormal basis (columns) of the affine hull of the rows of X."""
    origin = X[0]
    D = X[1:] - origin
    if D.shape[0] == 0:
        return origin, np.zeros((X.shape[1], 0))
    scale = max(float(np.abs(D).max()), 1e-300)
    U, sv, _ = np.linalg.svd(D.T / scale, full_matrices=False)
    rank = int(np.sum(sv > _RANK_TOL * max(sv[0], 1e-300)))
    return origin, U[:, :rank]


def _circumball(Z: np.ndarray, idx: list[int]):
    """Smallest ball with the points Z[idx] on its boundary, or None if they are dependent."""
    if not idx:
        return None
    b0 = Z[idx[0]]
    if len(idx) == 1:
        return b0.copy(), 0.0
    V = Z[idx[1:]] - b0
    G = V @ V.T
    rhs = 0.5 * np.sum(V * V, axis=1)
    try:
        lam = np.linalg.solve(G, rhs)
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(lam)):
        return None
    c = b0 + lam @ V
    return c, float(np.sum((c - b0) ** 2))


def _inside(z, ball, scale_sq):
    c, r2 = ball
    return float(np.sum((z - c) ** 2)) <= r2 * (1 + _INSIDE_RTOL) + _INSIDE_RTOL * scale_sq


def _welzl_mtf(Z, order, end, boundary, max_boundary, scale_sq):
    ball = _circumball(Z, boundary)
    if ball is None:
        ball = (Z[order[0]].copy(), 0.0) if not boundary else None
    if len(boundary) == max_boundary:
        return ball
    i = 0
    while i < end:
        p = order[i]
        if ball is None or not _inside(Z[p], ball, scale_sq):
            cand = _welzl_mtf(Z, order, i, boundary + [p], max_boundary, scale_sq)
            if cand is not None:
                ball = cand
            order.insert(0, order.pop(i))
        i += 1
    return ball


def chebyshev_ball(pts) -> EnclosingBall:
    """Minimum enclosing ball, computed in the affine hull of the points."""
    X = _as_points(pts)
    m = X.shape[0]
    if m == 0:
        raise DegenerateInput("empty point set")
    origin, U = _affine_frame(X)
    if U.shape[1] == 0:
        return EnclosingBall(origin.copy(), 0.0, (0,))
    Z = (X - origin) @ U
    scale_sq = float(np.max(np.sum(Z * Z, axis=1)))
    order = list(range(m))
    c, _ = _welzl_mtf(Z, order, m, [], U.shape[1] + 1, scale_sq)
    center = origin + U @ c
    d2 = np.sum((X - center) ** 2, axis=1)
    r2 = float(d2.max())
    tol = 1e-9 * max(r2, 1.0)
    support = tuple(int(i) for i in np.flatnonzero(np.abs(d2 - r2) <= tol))
    return EnclosingBall(center, r2, support)


def list_radius_sq(code, L: int) -> float:
    """Smallest Chebyshev radius squared over all L-subsets of the code."""
    X = _as_points(code)
    M = X.shape[0]
    if int(L) != L or L < 2:
        raise DomainError("L must be an integer >= 2")
    if M < L:
        raise DomainError("code has fewer than L points")
    if math.comb(M, L) > ENUMERATION_LIMIT:
        raise TooLarge(f"C({M}, {L}) subsets exceeds {ENUMERATION_LIMIT}")
    best = math.inf
    for sub in combinations(range(M), L):
        best = min(best, chebyshev_ball(X[list(sub)]).radius_sq)
    return best


def is_multiple_packing(code, N: float, L: int) -> bool:
    if not N > 0:
        raise DomainError("N must be positive")
    X = _as_points(code)
    return list_radius_sq(X, L) > X.shape[1] * N


def order_voronoi_member(y, code, subset) -> bool:
    """True iff every point outside subset is strictly farther from y than all of subset."""
    X = _as_points(code)
    sub = sorted(set(int(i) for i in subset))
    if not sub:
        raise DomainError("subset must be nonempty")
    if len(sub) >= X.shape[0] or sub[0] < 0 or sub[-1] >= X.shape[0]:
        raise DomainError("subset must be a proper subset of the code indices")
    d2 = np.sum((X - np.asarray(y, dtype=float)) ** 2, axis=1)
    mask = np.zeros(X.shape[0], dtype=bool)
    mask[sub] = True
    return bool(d2[~mask].min() > d2[mask].max())


def cone_member(y, apex, axis, half_angle: float) -> bool:
    if not 0 < half_angle < math.pi / 2:
        raise DomainError("half_angle must lie in (0, pi/2)")
    axis = np.asarray(axis, dtype=float)
    if abs(float(np.linalg.norm(axis)) - 1) > 1e-12:
        raise DomainError("axis must be a unit vector")
    v = np.asarray(y, dtype=float) - np.asarray(apex, dtype=float)
    return bool(v @ axis >= np.linalg.norm(v) * math.cos(half_angle))


def cone_for_list(points, vertex: int):
    """Cone attached to a boundary point of a list's Chebyshev ball.

    Apex is the ball center, the axis points from the vertex through the
    center, and sin(half_angle) = (min pairwise distance / 2) / radius.
    Returns (apex, axis, half_angle).
    """
    X = _as_points(points)
    ball = chebyshev_ball(X)
    apex = ball.center
    axis = apex - X[vertex]
    axis = axis / np.linalg.norm(axis)
    diffs = X[:, None, :] - X[None, :, :]
    dist = np.sqrt(np.sum(diffs**2, axis=-1))
    dmin = dist[np.triu_indices(X.shape[0], 1)].min()
    ratio = min(dmin / 2 / ball.radius, 1.0)
    return apex, axis, math.asin(ratio)
