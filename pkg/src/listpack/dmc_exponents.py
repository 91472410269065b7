"""Gallager-type list-decoding exponents for discrete memoryless channels (nats)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import DomainError, NonFinite, TooLarge
from .numerics import Interval, golden_section_max

ENUMERATION_LIMIT = 10**6
LN2 = math.log(2.0)


@dataclass(frozen=True)
class Dmc:
    W: np.ndarray
    Px: np.ndarray

    def __init__(self, W, Px=None):
        W = np.array(W, dtype=float)
        if W.ndim != 2:
            raise DomainError("W must be a |X| x |Y| matrix")
        Px = np.full(W.shape[0], 1.0 / W.shape[0]) if Px is None else np.array(Px, dtype=float)
        if Px.shape != (W.shape[0],):
            raise DomainError("Px length must match the rows of W")
        if np.any(W < 0) or np.any(Px < 0):
            raise DomainError("probabilities must be nonnegative")
        if np.any(np.abs(W.sum(axis=1) - 1) > 1e-12) or abs(Px.sum() - 1) > 1e-12:
            raise DomainError("rows of W and Px must sum to 1")
        W.setflags(write=False)
        Px.setflags(write=False)
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "Px", Px)


def bsc(p: float) -> Dmc:
    return Dmc([[1 - p, p], [p, 1 - p]])


def mutual_information(d: Dmc) -> float:
    py = d.Px @ d.W
    total = 0.0
    for x, px in enumerate(d.Px):
        for y, w in enumerate(d.W[x]):
            if px > 0 and w > 0:
                total += px * w * math.log(w / py[y])
    return total


def gallager_e0(d: Dmc, rho: float) -> float:
    if rho < 0:
        raise DomainError("rho must be nonnegative")
    inner = d.Px @ np.power(d.W, 1.0 / (1.0 + rho))
    return -math.log(float(np.sum(inner ** (1.0 + rho))))


def dmc_random_coding_exponent(d: Dmc, R: float, L: int, tol: float = 1e-10) -> float:
    if R < 0:
        raise DomainError("rate must be nonnegative")
    if int(L) != L or L < 2:
        raise DomainError("L must be an integer >= 2")

    def obj(rho):
        return -(L - 1) * rho * R + gallager_e0(d, (L - 1) * rho)

    _, val = golden_section_max(obj, Interval(0.0, 1.0), tol)
    return max(val, 0.0)


def _list_affinities(d: Dmc, L: int):
    """Prior weight and sum_y prod_i W(y|x_i)^{1/L} for every input L-tuple."""
    nx = d.W.shape[0]
    if nx**L > ENUMERATION_LIMIT:
        raise TooLarge(f"|X|^L = {nx**L} exceeds {ENUMERATION_LIMIT}")
    root = np.power(d.W, 1.0 / L)
    weights, affin = [], []
    for tup in product(range(nx), repeat=L):
        weights.append(float(np.prod(d.Px[list(tup)])))
        affin.append(float(np.sum(np.prod(root[list(tup)], axis=0))))
    return np.array(weights), np.array(affin)


def dmc_expurgated_ex(d: Dmc, rho: float, L: int) -> float:
    if rho < 1:
        raise DomainError("rho must be >= 1")
    w, a = _list_affinities(d, L)
    keep = (w > 0) & (a > 0)
    total = float(np.sum(w[keep] * a[keep] ** (1.0 / rho)))
    val = -rho * math.log(total)
    if not math.isfinite(val):
        raise NonFinite("expurgated function is not finite")
    return val


def dmc_expurgated_exponent(d: Dmc, R: float, L: int, rho_max: float = 64.0,
                            tol: float = 1e-10) -> float:
    """Maximum over rho in [1, rho_max] of -(L-1) rho R + E_x(rho), floored at 0."""
    if R < 0:
        raise DomainError("rate must be nonnegative")
    if not (math.isfinite(rho_max) and rho_max >= 1):
        raise DomainError("rho_max must be finite and >= 1")
    w, a = _list_affinities(d, L)
    keep = (w > 0) & (a > 0)
    w, a = w[keep], a[keep]

    def obj(rho):
        return -(L - 1) * rho * R - rho * math.log(float(np.sum(w * a ** (1.0 / rho))))

    if rho_max == 1:
        return max(obj(1.0), 0.0)
    _, val = golden_section_max(obj, Interval(1.0, rho_max), tol)
    if not math.isfinite(val):
        raise NonFinite("expurgated exponent is not finite")
    return max(val, 0.0)


def to_bits(value_nats: float) -> float:
    return value_nats / LN2
