"""Root finding, small optimizers, special functions and seeded random streams."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import optimize, special

from .errors import DomainError, NoSignChange, NonFinite

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise DomainError("interval endpoints must be finite")
        if not self.lo < self.hi:
            raise DomainError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class SeedSpec:
    """Key for one independent random stream.

    The stream is a Philox counter-based generator keyed by ``master_seed``
    with the high counter word set to ``stream_index``, so streams never
    overlap and any stream can be created without touching the others.
    """

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not 0 <= self.master_seed < 2**64:
            raise DomainError("master_seed must be a 64-bit unsigned integer")
        if not 0 <= self.stream_index < 2**64:
            raise DomainError("stream_index must be a nonnegative 64-bit integer")

    def generator(self) -> np.random.Generator:
        bitgen = np.random.Philox(key=self.master_seed, counter=[0, 0, 0, self.stream_index])
        return np.random.Generator(bitgen)

    def child(self, stream_index: int) -> "SeedSpec":
        return SeedSpec(self.master_seed, stream_index)


class StreamFactory:
    """Fast access to many streams of one master seed.

    ``factory(i)`` yields the same draws as ``SeedSpec(master_seed, i).generator()``
    but reuses a single bit generator by resetting its counter, which is
    several times cheaper when millions of short streams are needed. Not
    thread-safe: give each worker its own factory.
    """

    def __init__(self, master_seed: int):
        SeedSpec(master_seed)
        self._bitgen = np.random.Philox(key=master_seed)
        self._gen = np.random.Generator(self._bitgen)
        self._state = self._bitgen.state

    def __call__(self, stream_index: int) -> np.random.Generator:
        state = dict(self._state)
        state["state"] = {"counter": np.array([0, 0, 0, stream_index], dtype=np.uint64),
                          "key": self._state["state"]["key"]}
        state["buffer_pos"] = 4
        state["has_uint32"] = 0
        state["uinteger"] = 0
        self._bitgen.state = state
        return self._gen


def bisect(f: Callable[[float], float], iv: Interval, tol: float = 1e-12) -> float:
    if tol <= 0:
        raise DomainError("tol must be positive")
    flo, fhi = f(iv.lo), f(iv.hi)
    if flo == 0:
        return iv.lo
    if fhi == 0:
        return iv.hi
    if flo * fhi > 0:
        raise NoSignChange(f"f({iv.lo})={flo} and f({iv.hi})={fhi} have the same sign")
    return optimize.bisect(f, iv.lo, iv.hi, xtol=tol, maxiter=500)


def golden_section_max(f: Callable[[float], float], iv: Interval, tol: float = 1e-10):
    """Maximize a unimodal function on a closed interval.

    Returns (argmax, value). Endpoints are compared at the end so that a
    maximum sitting on the boundary is returned exactly.
    """
    a, b = iv.lo, iv.hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    candidates = [(fc, c), (fd, d), (f(iv.lo), iv.lo), (f(iv.hi), iv.hi)]
    best_val, best_x = max(candidates, key=lambda p: p[0])
    return best_x, best_val


def _check_finite(v):
    if not np.all(np.isfinite(v)):
        raise NonFinite("objective returned a non-finite value")
    return v


def minimize_1d(f: Callable[[float], float], iv: Interval, grid: int = 2048,
                refine_tol: float = 1e-12):
    """Grid scan followed by a bounded Brent polish around the best cell."""
    xs = np.linspace(iv.lo, iv.hi, grid)
    vals = np.array([_check_finite(f(x)) for x in xs])
    k = int(np.argmin(vals))
    best_x, best_v = float(xs[k]), float(vals[k])
    lo, hi = xs[max(k - 1, 0)], xs[min(k + 1, grid - 1)]
    if hi > lo:
        res = optimize.minimize_scalar(f, bounds=(lo, hi), method="bounded",
                                       options={"xatol": refine_tol, "maxiter": 500})
        v = float(_check_finite(res.fun))
        if v < best_v:
            best_x, best_v = float(res.x), v
    return best_x, best_v


def minimize_2d(f: Callable, box: tuple[Interval, Interval], grid: int = 256,
                refine_tol: float = 1e-12, sweeps: int = 40, vectorized: bool = False):
    """Coarse grid scan plus coordinate-descent refinement.

    With ``vectorized=True`` the grid is evaluated in one call on 2-D arrays.
    Returns ((x, y), value); the value never exceeds the best grid value.
    """
    if grid < 16:
        raise DomainError("grid must be at least 16")
    bx, by = box
    xs = np.linspace(bx.lo, bx.hi, grid)
    ys = np.linspace(by.lo, by.hi, grid)
    if vectorized:
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        vals = np.asarray(f(X, Y), dtype=float)
    else:
        vals = np.array([[f(x, y) for y in ys] for x in xs], dtype=float)
    _check_finite(vals)
    i, j = np.unravel_index(int(np.argmin(vals)), vals.shape)
    x, y, best = float(xs[i]), float(ys[j]), float(vals[i, j])

    hx, hy = xs[1] - xs[0], ys[1] - ys[0]
    for _ in range(sweeps):
        prev = best
        lo, hi = max(bx.lo, x - hx), min(bx.hi, x + hx)
        res = optimize.minimize_scalar(lambda t: _check_finite(f(t, y)), bounds=(lo, hi),
                                       method="bounded", options={"xatol": refine_tol})
        if res.fun < best:
            hx = max(2.0 * abs(res.x - x), refine_tol)
            x, best = float(res.x), float(res.fun)
        lo, hi = max(by.lo, y - hy), min(by.hi, y + hy)
        res = optimize.minimize_scalar(lambda t: _check_finite(f(x, t)), bounds=(lo, hi),
                                       method="bounded", options={"xatol": refine_tol})
        if res.fun < best:
            hy = max(2.0 * abs(res.x - y), refine_tol)
            y, best = float(res.x), float(res.fun)
        if prev - best <= 1e-16 * max(1.0, abs(best)):
            break
    return (x, y), best


def q_function(x: float) -> float:
    return 0.5 * special.erfc(x / math.sqrt(2.0))


def chi_square_tail_exponent(delta: float, side: str = "upper") -> float:
    if side == "upper":
        if not delta > 0:
            raise DomainError("upper tail needs delta > 0")
        return 0.5 * (-delta + math.log1p(delta))
    if side == "lower":
        if not 0 < delta < 1:
            raise DomainError("lower tail needs 0 < delta < 1")
        return 0.5 * (delta + math.log1p(-delta))
    raise DomainError(f"side must be 'upper' or 'lower', got {side!r}")
