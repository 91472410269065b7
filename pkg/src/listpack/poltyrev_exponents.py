"""List-decoding exponents for unconstrained (infinite) constellations.

The rate enters through alpha >= 1, defined by R = (1/2) ln(1 / (2 pi e sigma^2 alpha^2)),
so alpha = 1 is the capacity of the unconstrained channel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import special

from .awgn_exponents import EXPURGATED, RANDOM_CODING, STRAIGHT_LINE, ExponentPoint
from .errors import DomainError
from .numerics import Interval, minimize_1d

LN2 = math.log(2.0)


@dataclass(frozen=True)
class AlphaL:
    alpha: float
    L: int
    sigma: float | None = None

    def __post_init__(self):
        if not self.alpha >= 1:
            raise DomainError("alpha must be >= 1")
        if int(self.L) != self.L or self.L < 2:
            raise DomainError("L must be an integer >= 2")
        if self.sigma is not None and not self.sigma > 0:
            raise DomainError("sigma must be positive")

    @property
    def rate(self) -> float:
        if self.sigma is None:
            raise DomainError("rate needs sigma")
        return rate_of_alpha(self.alpha, self.sigma)


def rate_of_alpha(alpha: float, sigma: float) -> float:
    return 0.5 * math.log(1.0 / (2 * math.pi * math.e * sigma * sigma * alpha * alpha))


def alpha_of_rate(R: float, sigma: float) -> float:
    return math.sqrt(1.0 / (2 * math.pi * math.e * sigma * sigma)) * math.exp(-R)


def e_sl_unbdd(a: AlphaL) -> float:
    L = a.L
    return (L - 1) / 2 - L / 2 * math.log(L) + (L - 1) * math.log(a.alpha)


def e_r_unbdd(a: AlphaL) -> float:
    if a.alpha <= math.sqrt(a.L):
        return gaussian_norm_density_exponent(a.alpha)
    return e_sl_unbdd(a)


def _q(alpha: float, L: int) -> float:
    a2 = alpha * alpha
    return math.sqrt(a2 * a2 + 8 * a2 * (2 * L - 3) + 16)


def e_ex_unbdd(a: AlphaL) -> float:
    """Closed-form value F(alpha, L) of the expurgated exponent."""
    L, a2 = a.L, a.alpha * a.alpha
    q = _q(a.alpha, L)
    return (a2 / 16 + q / 16 - (L - 1) / 2 * math.log(q - a2 + 4)
            + (L - 2) / 2 * math.log(q + a2 + 4) + 1.5 * LN2 - 0.25)


def s0(a: AlphaL) -> float:
    """Stationary point of the middle-regime objective."""
    return math.sqrt((a.alpha ** 2 + _q(a.alpha, a.L) + 4) / 8)


def exponent_lower_bound_unbdd(a: AlphaL) -> ExponentPoint:
    L, alpha = a.L, a.alpha
    if alpha <= math.sqrt(L):
        return ExponentPoint(alpha, gaussian_norm_density_exponent(alpha), RANDOM_CODING)
    if alpha <= math.sqrt(2 * L):
        return ExponentPoint(alpha, e_sl_unbdd(a), STRAIGHT_LINE)
    return ExponentPoint(alpha, e_ex_unbdd(a), EXPURGATED)


def c_of_s(s: float, alpha: float) -> float:
    """Radius bound for the intersection of two balls, as a function of the norm scale s."""
    if s <= alpha / 2:
        return 0.0
    if s <= alpha / math.sqrt(2):
        return math.sqrt(max(s * s - (s - alpha * alpha / (2 * s)) ** 2, 0.0))
    return s


def gaussian_norm_density_exponent(s: float) -> float:
    if not s > 0:
        raise DomainError("s must be positive")
    return s * s / 2 - math.log(s) - 0.5


def middle_objective(s: float, alpha: float, L: int) -> float:
    c = c_of_s(s, alpha)
    if c <= 0:
        return math.inf
    return gaussian_norm_density_exponent(s) + (L - 1) * (math.log(alpha) - math.log(c))


def outer_objective(s: float, alpha: float, L: int) -> float:
    return gaussian_norm_density_exponent(s) + (L - 1) * max(math.log(alpha) - math.log(s), 0.0)


def numeric_exe_oracle(a: AlphaL, grid: int = 4096) -> float:
    """Minimum of the piecewise objective by grid scan and local polish."""
    alpha, L = a.alpha, a.L
    edge = alpha / math.sqrt(2)
    lo = alpha / 2 * (1 + 1e-9)
    _, v2 = minimize_1d(lambda s: middle_objective(s, alpha, L), Interval(lo, edge), grid=grid)
    _, v3 = minimize_1d(lambda s: outer_objective(s, alpha, L),
                        Interval(edge, max(2 * alpha, 2.0) + 1.0), grid=grid)
    return min(v2, v3)


def ball_log_volume(n: int, r: float = 1.0) -> float:
    """Natural log of the volume of an n-ball of radius r."""
    return n / 2 * math.log(math.pi) - special.gammaln(n / 2 + 1) + n * math.log(r)


def r_star(alpha: float, sigma: float, n: int) -> float:
    if not (alpha >= 1 and sigma > 0 and n >= 1):
        raise DomainError("need alpha >= 1, sigma > 0, n >= 1")
    return alpha * sigma * math.sqrt(n)


def r_star_exact(alpha: float, sigma: float, n: int) -> float:
    """lambda^{-1/n} V_n^{-1/n} with lambda = e^{nR}, before dropping the 1 + o(1) factor."""
    R = rate_of_alpha(alpha, sigma)
    return math.exp(-R - ball_log_volume(n) / n)


def poltyrev_exponent(alpha: float) -> float:
    """Unique-decoding reference curve for L = 2."""
    if alpha < 1:
        raise DomainError("alpha must be >= 1")
    if alpha <= math.sqrt(2):
        return alpha * alpha / 2 - math.log(alpha) - 0.5
    if alpha <= 2:
        return 0.5 - LN2 + math.log(alpha)
    return alpha * alpha / 8


