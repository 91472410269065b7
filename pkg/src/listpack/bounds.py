"""Closed-form multiple-packing capacity bounds (rates in nats)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import DomainError, SigmaUndefined

TWO_PI_E = 2.0 * math.pi * math.e


@dataclass(frozen=True)
class PackingParams:
    P: float
    N: float
    L: int

    def __post_init__(self):
        if not (self.P > 0 and self.N > 0):
            raise DomainError("P and N must be positive")
        if int(self.L) != self.L or self.L < 2:
            raise DomainError("L must be an integer >= 2")

    @property
    def plotkin_noise(self) -> float:
        return (self.L - 1) * self.P / self.L


@dataclass(frozen=True)
class DerivationParams:
    s: float
    rho_of_sigma: Callable[[float], float]
    sigma_max: float | None
    rate: float


def _check_L(L):
    if int(L) != L or L < 2:
        raise DomainError("L must be an integer >= 2")


def lb_capacity_bounded(p: PackingParams) -> float:
    P, N, L = p.P, p.N, p.L
    if N > p.plotkin_noise:
        raise DomainError("N beyond the Plotkin point (L-1)P/L")
    return 0.5 * (math.log((L - 1) * P / (L * N)) + math.log(P / (L * (P - N))) / (L - 1))


def ub_capacity_bounded(p: PackingParams) -> float:
    if p.N > p.plotkin_noise:
        raise DomainError("upper bound needs N <= (L-1)P/L")
    return 0.5 * math.log((p.L - 1) * p.P / (p.L * p.N))


def cap_ld_bounded(P: float, N: float) -> float:
    if not (P >= N > 0):
        raise DomainError("need P >= N > 0")
    return 0.5 * math.log(P / N)


def cap_ld_unbounded(N: float) -> float:
    if not N > 0:
        raise DomainError("N must be positive")
    return 0.5 * math.log(1.0 / (TWO_PI_E * N))


def ub_capacity_unbounded(N: float, L: int) -> float:
    if not N > 0:
        raise DomainError("N must be positive")
    _check_L(L)
    return 0.5 * math.log((L - 1) / (TWO_PI_E * N * L))


def lb_capacity_unbounded(N: float, L: int) -> float:
    return ub_capacity_unbounded(N, L) - math.log(L) / (2 * (L - 1))


def rate_from_t(t: float, L: int) -> float:
    """Rate attached to t = 1 - 2Ps at the stationary point of the expurgated objective."""
    if not 1.0 / L < t <= 1.0:
        raise DomainError("t must lie in (1/L, 1]")
    return 0.5 * (math.log((L - 1) * t / (L * t - 1)) + math.log(t) / (L - 1))


def derivation_params(p: PackingParams) -> DerivationParams:
    P, N, L = p.P, p.N, p.L
    if not N < p.plotkin_noise:
        raise DomainError("need N strictly below the Plotkin point")
    s = ((L - 1) * P - L * N) / (2 * L * (P - N) * P)
    denom = L * (P - N) - P
    if denom <= 0:
        raise SigmaUndefined("L(P - N) <= P, so no noise level makes rho >= 1")
    sigma_max = math.sqrt(N * (P - N) / denom)

    def rho_of_sigma(sigma: float) -> float:
        return N * (P - N) / (denom * sigma * sigma)

    return DerivationParams(s=s, rho_of_sigma=rho_of_sigma, sigma_max=sigma_max,
                            rate=lb_capacity_bounded(p))


def sigma_crit_unbounded(R: float, L: int) -> tuple[float, float]:
    """Noise level maximizing the expurgated trade-off, and the matching alpha."""
    _check_L(L)
    sigma = math.sqrt(math.exp(-(L / (L - 1)) * math.log(L) - math.log(TWO_PI_E) - 2 * R))
    alpha = math.sqrt(L ** (L / (L - 1)))
    return sigma, alpha


def rate_of_code(M: float, n: int) -> float:
    if M < 1 or n < 1:
        raise DomainError("need M >= 1 and n >= 1")
    return math.log(M) / n
