"""List-decoding error exponents for the power-constrained AWGN channel.

Everything is parameterized by snr = P / sigma^2 and a rate R in nats. The
lower bound on the exponent is piecewise: expurgated below r_x, a straight
line of slope -(L-1) between r_x and r_crit, and the L-free random coding
exponent above r_crit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError
from .numerics import Interval, bisect, minimize_2d

RANDOM_CODING = "random_coding"
STRAIGHT_LINE = "straight_line"
EXPURGATED = "expurgated"


class Regime(str, Enum):
    random_coding = RANDOM_CODING
    straight_line = STRAIGHT_LINE
    expurgated = EXPURGATED


@dataclass(frozen=True)
class SnrRate:
    snr: float
    R: float

    def __post_init__(self):
        if not self.snr > 0:
            raise DomainError("snr must be positive")
        if not self.R >= 0:
            raise DomainError("rate must be nonnegative")

    @property
    def capacity(self) -> float:
        return capacity(self.snr)


@dataclass(frozen=True)
class ExponentPoint:
    R: float
    value: float
    regime: str


@dataclass(frozen=True)
class ExpurgParams:
    t: float
    s: float
    rho: float
    gamma: float | None = None


def capacity(snr: float) -> float:
    return 0.5 * math.log1p(snr)


def _check_L(L):
    if int(L) != L or L < 2:
        raise DomainError("L must be an integer >= 2")


def r_crit(snr: float, L: int) -> float:
    _check_L(L)
    root = math.sqrt(1 - 2 * (L - 2) * snr / L**2 + snr**2 / L**2)
    return 0.5 * math.log(0.5 + snr / (2 * L) + 0.5 * root)


def r_x(snr: float, L: int) -> float:
    _check_L(L)
    q = math.sqrt(L * L + snr * snr - 2 * snr * (L - 2))
    return 0.5 * (math.log((q + L + snr) / (2 * L))
                  + math.log((q + L - snr) / (2 * L)) / (L - 1))


def e_r(sr: SnrRate) -> float:
    snr, R = sr.snr, sr.R
    if R <= 0:
        raise DomainError("random coding exponent is singular at R = 0")
    if R > sr.capacity * (1 + 1e-12):
        raise DomainError("rate above capacity")
    e = math.exp(2 * R)
    em1 = math.expm1(2 * R)
    root = math.sqrt(1 + 4 * e / (snr * em1))
    inner = e - snr * em1 / 2 * (root - 1)
    return 0.5 * math.log(inner) + snr / (4 * e) * (e + 1 - em1 * root)


def e_sl(sr: SnrRate, L: int) -> float:
    _check_L(L)
    snr, R = sr.snr, sr.R
    D = math.sqrt((L - snr) ** 2 + 4 * snr)
    return (-R * (L - 1) + (L - 1) / 2 * math.log(L + snr + D) + 0.5 * math.log(L - snr + D)
            + 0.25 * (L + snr - D) - L / 2 * math.log(2 * L))


def solve_t(R: float, L: int, tol: float = 1e-14) -> float:
    """Root in [1/L, 1] of (Lt - 1) e^{2R} = (L - 1) t^{L/(L-1)}."""
    _check_L(L)
    if R < 0:
        raise DomainError("rate must be nonnegative")
    if R == 0:
        return 1.0
    e2r = math.exp(2 * R)

    def g(t):
        return (L * t - 1) * e2r - (L - 1) * t ** (L / (L - 1))

    t = bisect(g, Interval(1.0 / L, 1.0), tol)
    resid = abs(g(t))
    if resid > 1e-10:
        raise ArithmeticError(f"solve_t residual {resid:.3g} above 1e-10")
    return t


def e_ex(sr: SnrRate, L: int) -> float:
    _check_L(L)
    if sr.R > r_x(sr.snr, L) * (1 + 1e-12) + 1e-15:
        raise DomainError("expurgated form needs R <= r_x(snr, L)")
    t = solve_t(sr.R, L)
    return sr.snr * (L * t - 1) / (2 * L * t)


def expurg_params(sr: SnrRate, L: int, P: float = 1.0) -> ExpurgParams:
    """Stationary point (t, s, rho) of the expurgated objective for this rate."""
    t = solve_t(sr.R, L)
    s = (1 - t) / (2 * P)
    rho = math.inf if t == 1.0 else (L * t - 1) * sr.snr / (L * L * (1 - t) * t)
    return ExpurgParams(t=t, s=s, rho=rho)


def exponent_lower_bound(sr: SnrRate, L: int) -> ExponentPoint:
    _check_L(L)
    if sr.R > sr.capacity * (1 + 1e-12):
        raise DomainError("rate above capacity")
    if sr.R <= r_x(sr.snr, L):
        return ExponentPoint(sr.R, e_ex(sr, L), EXPURGATED)
    if sr.R <= r_crit(sr.snr, L):
        return ExponentPoint(sr.R, e_sl(sr, L), STRAIGHT_LINE)
    R = min(sr.R, sr.capacity)
    return ExponentPoint(sr.R, max(e_r(SnrRate(sr.snr, R)), 0.0), RANDOM_CODING)


def rce_objective(s, gamma, sr: SnrRate, P: float = 1.0):
    """Random-coding objective in (s, gamma); its maximum over both is the exponent.

    gamma = 1 + (L - 1) rho. Works elementwise on arrays.
    """
    s = np.asarray(s, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    a = 1 - 2 * s * P
    b = a + sr.snr / gamma
    if np.any(a <= 0) or np.any(b <= 0):
        raise DomainError("logarithm argument not positive")
    out = (-sr.R * (gamma - 1) + (gamma - 1) / 2 * np.log(b) + 0.5 * np.log(a)
           + s * P * gamma)
    return float(out) if out.ndim == 0 else out


def expurg_objective(s, rho, R, P, sigma, L):
    """Expurgated objective in (s, rho); the exponent is minus its minimum."""
    s = np.asarray(s, dtype=float)
    rho = np.asarray(rho, dtype=float)
    a = 1 - 2 * s * P
    b = a + P / (sigma * sigma * L * rho)
    if np.any(a <= 0) or np.any(b <= 0):
        raise DomainError("logarithm argument not positive")
    out = R * (L - 1) * rho - rho * (s * L * P + 0.5 * np.log(a) + (L - 1) / 2 * np.log(b))
    return float(out) if out.ndim == 0 else out


def stationary_s(gamma: float, snr: float, P: float = 1.0) -> float:
    return (1 + snr / gamma - math.sqrt((gamma - snr) ** 2 + 4 * snr) / gamma) / (4 * P)


def stationary_gamma(R: float, snr: float) -> float:
    if R <= 0:
        raise DomainError("stationary gamma is singular at R = 0")
    e = math.exp(2 * R)
    return snr / (2 * e) * (1 + math.sqrt(1 + 4 * e / (snr * math.expm1(2 * R))))


# Oracles: direct numerical optimization of the objectives above.

_S_EDGE = 1e-9


def rce_oracle(sr: SnrRate, L: int, grid: int = 256):
    """Maximum of the random-coding objective over s in [0, 1/2), gamma in [1, L]."""
    box = (Interval(0.0, 0.5 * (1 - _S_EDGE)), Interval(1.0, float(L)))
    arg, val = minimize_2d(lambda s, g: -rce_objective(s, g, sr), box, grid=grid,
                           vectorized=True)
    return -val, arg


def expurg_oracle(sr: SnrRate, L: int, rho_max: float = 32.0, grid: int = 256):
    """Minus the minimum of the expurgated objective over s in [0, 1/2), rho in [1, rho_max].

    Uses P = 1 and sigma^2 = 1/snr.
    """
    sigma = 1.0 / math.sqrt(sr.snr)
    box = (Interval(0.0, 0.5 * (1 - _S_EDGE)), Interval(1.0, rho_max))
    arg, val = minimize_2d(lambda s, r: expurg_objective(s, r, sr.R, 1.0, sigma, L), box,
                           grid=grid, vectorized=True)
    return -val, arg


# Unique-decoding (L = 2) reference forms.

def gallager_high(snr: float, R: float) -> float:
    # transcribed separately from e_r on purpose
    b = math.exp(2 * R)
    k = math.sqrt(1 + 4 * b / (snr * (b - 1)))
    return (0.5 * math.log(b - snr * (b - 1) / 2 * (k - 1))
            + snr / (4 * b) * (b + 1 - (b - 1) * k))


def gallager_mid(snr: float, R: float) -> float:
    root = math.sqrt(1 + snr * snr / 4)
    return -R + 0.5 * math.log(0.5 + 0.5 * root) + 0.5 + snr / 4 - 0.5 * root


def gallager_low(snr: float, R: float) -> float:
    return snr / 4 * (1 - math.sqrt(-math.expm1(-2 * R)))


def gallager_rx(snr: float) -> float:
    return 0.5 * math.log(0.5 + 0.5 * math.sqrt(1 + snr * snr / 4))


def gallager_rcrit(snr: float) -> float:
    return 0.5 * math.log(0.5 + snr / 4 + 0.5 * math.sqrt(1 + snr * snr / 4))


def gallager_exponent(snr: float, R: float) -> float:
    """Unique-decoding exponent assembled from the three reference forms."""
    if R <= gallager_rx(snr):
        return gallager_low(snr, R)
    if R <= gallager_rcrit(snr):
        return gallager_mid(snr, R)
    return max(gallager_high(snr, min(R, capacity(snr))), 0.0) if R > 0 else 0.0
