"""Latitude cutoffs, signal-strength thresholds, and ground-state predictions.

Solves for the preferred latitude (largest solution of the balance equation
snr*m^k/sqrt(p) = m^2/sqrt(1-m^2)), the three increasing thresholds
(existence of that latitude, it overtaking the high-latitude cutoff, and
trivialization of the low-latitude band), and the predicted ground-state
energy per site with its two equivalent closed forms.
"""

from __future__ import annotations

import dataclasses
import functools
import math

import numpy as np
from scipy.optimize import brentq

from . import scalar_core as _sc
from .model import ModelParams

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclasses.dataclass(frozen=True)
class ThresholdReport:
    """The three thresholds for one (p, k), plus a monotonicity diagnostic.

    monotonicity_verified records whether the low-latitude supremum was
    nonincreasing along lambda_grid; it is reported only, never used to
    alter lambda_tr.
    """

    lambda1: float
    lambda2: float
    lambda_tr: float
    monotonicity_verified: bool
    lambda_grid: tuple[float, ...]

    def __post_init__(self):
        if not self.lambda1 <= self.lambda2 + 1e-9 <= self.lambda_tr + 2e-9:
            raise ValueError("thresholds must be ordered lambda1 <= lambda2 <= lambda_tr")


@dataclasses.dataclass(frozen=True)
class GsePrediction:
    """Preferred latitude and ground-state energy density, both closed forms."""

    m_star: float
    x_star: float
    y_star: float
    gse_alt_form: float

    def __post_init__(self):
        if not 0.0 < self.m_star <= 1.0:
            raise ValueError("preferred latitude must lie in (0, 1]")
        if abs(self.x_star - self.gse_alt_form) > 1e-10 * max(1.0, abs(self.x_star)):
            raise ValueError("the two ground-state closed forms disagree")


class LowLatitudeSup(float):
    """The low-latitude supremum as a float, carrying where it was attained
    and the two endpoint values of the band."""

    arg_max: float
    at_zero: float
    at_cutoff: float

    def __new__(cls, sup: float, arg_max: float, at_zero: float, at_cutoff: float):
        obj = super().__new__(cls, sup)
        obj.arg_max = float(arg_max)
        obj.at_zero = float(at_zero)
        obj.at_cutoff = float(at_cutoff)
        return obj


def m_lambda(params: ModelParams) -> float:
    """High-latitude cutoff: min(1, ((p-2)sqrt(p)/(snr*sqrt(p-1)))^(1/k)).

    Above this latitude the complexity has an interior maximum in the
    rescaled energy.  Saturates at 1 when the signal is weak (or zero).
    """
    return _sc._m_lambda(params)


def _balance_residual(m: float, params: ModelParams) -> float:
    """Residual of the latitude balance equation snr*m^k/sqrt(p) - m^2/sqrt(1-m^2)."""
    p, k, lam = params.p, params.k, params.snr
    return lam * m ** k / math.sqrt(p) - m * m / math.sqrt(1.0 - m * m)


def m_star(params: ModelParams) -> float | None:
    """Largest latitude solving the balance equation on (0, 1], or None.

    Closed forms for k = 1 and k = 2; for k > 2 a bracketed root on
    [sqrt((k-2)/(k-1)), 1), which exists exactly when the signal strength
    reaches lambda1(p, k).  Convergence is certified in the latitude
    coordinate (final Newton correction below 1e-12): the raw equation
    residual is ill-conditioned near m = 1, where one ulp of m moves it by
    orders of magnitude, so the gate is expressed as backward error.
    """
    p, k, lam = params.p, params.k, params.snr
    if k == 1:
        if lam <= 0.0:
            return None
        return lam / math.sqrt(lam * lam + p)
    if k == 2:
        if lam <= math.sqrt(p):
            return None
        return math.sqrt(1.0 - p / (lam * lam))
    lam1 = lambda1(p, k)
    if lam < lam1 - 1e-12:
        return None
    lo = math.sqrt((k - 2.0) / (k - 1.0))
    hi = 1.0 - 1e-12

    def r(m: float) -> float:
        # scaled residual lam*m^(k-2)*sqrt(1-m^2) - sqrt(p): same roots on m > 0,
        # nonsingular at m -> 1
        return lam * m ** (k - 2) * math.sqrt(1.0 - m * m) - math.sqrt(p)

    r_lo = r(lo)
    if r_lo <= 0.0:
        if r_lo > -1e-9:
            return lo  # tangency: threshold signal strength exactly
        return None
    def dr(m: float) -> float:
        return lam * ((k - 2) * m ** (k - 3) * math.sqrt(1.0 - m * m)
                      - m ** (k - 1) / math.sqrt(1.0 - m * m))

    m = brentq(r, lo, hi, xtol=1e-14, rtol=8.9e-16)
    for _ in range(3):  # Newton polish on the scaled residual
        d = dr(m)
        if d == 0.0:
            break
        m -= r(m) / d
    d = dr(m)
    if d == 0.0 or abs(r(m) / d) > 1e-12:
        raise ArithmeticError(f"latitude solve did not converge at snr={lam}")
    return float(m)


@functools.lru_cache(maxsize=None)
def lambda1(p: int, k: int) -> float:
    """Signal strength at which the preferred latitude first exists.

    Zero for k <= 2; sqrt(p*(k-1)^(k-1)/(k-2)^(k-2)) for k > 2.
    """
    _validate_pk(p, k)
    if k <= 2:
        return 0.0
    return math.sqrt(p * (k - 1.0) ** (k - 1) / (k - 2.0) ** (k - 2))


@functools.lru_cache(maxsize=None)
def lambda2(p: int, k: int) -> float:
    """Signal strength at which the preferred latitude reaches the cutoff.

    Closed forms for k = 1 and k = 2; for k > 2 equals lambda1 when
    p <= k, otherwise the unique crossing of m_star and m_lambda found by
    bracketed root search (crossing gap < 1e-8).
    """
    _validate_pk(p, k)
    if k == 1:
        return math.sqrt(p * (p - 2.0))
    if k == 2:
        b = (p - 2.0) * math.sqrt(p) / math.sqrt(p - 1.0)
        return 0.5 * (b + math.sqrt(b * b + 4.0 * p))
    if p <= k:
        return lambda1(p, k)

    lam1 = lambda1(p, k)

    def gap(lam: float) -> float:
        pp = ModelParams(p, k, lam)
        ms = m_star(pp)
        if ms is None:  # only possible by rounding right at lambda1
            ms = math.sqrt((k - 2.0) / (k - 1.0))
        return ms - m_lambda(pp)

    lo, hi = lam1, lam1 + 1.0
    while gap(hi) < 0.0:
        lo, hi = hi, hi + max(1.0, hi - lam1)
        if hi > 1e6:
            raise ArithmeticError("no latitude crossing found below snr = 1e6")
    if gap(lo) > 0.0:
        return lo
    lam = brentq(gap, lo, hi, xtol=1e-12, rtol=8.9e-16)
    if abs(gap(lam)) > 1e-8:
        raise ArithmeticError("latitude crossing solve did not converge")
    return float(lam)


def _low_lat_values(m_grid: np.ndarray, x: float, params: ModelParams) -> np.ndarray:
    """Complexity at fixed energy density over a latitude grid (vectorized)."""
    p, k, lam = params.p, params.k, params.snr
    y = (p * x - (1.0 - p / k) * lam * m_grid ** k) / math.sqrt(2.0 * p * (p - 1))
    return np.asarray(_sc._s_tilde_raw(m_grid, y, params), dtype=float)


def _golden_max(f, a: float, b: float, iters: int = 60) -> tuple[float, float]:
    """Golden-section maximization of a unimodal-enough scalar function."""
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    if fc >= fd:
        return c, fc
    return d, fd


def low_latitude_sup(params: ModelParams, grid_size: int = 2000) -> LowLatitudeSup:
    """Supremum of the complexity at the predicted ground-state energy over
    the low-latitude band [0, m_lambda].

    Dense grid plus golden-section refinement around the best grid point.
    Also carries the two endpoint values (at latitude 0 and at the cutoff).
    Negative exactly when deep minima cannot hide at low latitude.
    """
    pred = gse_predict(params)
    x = pred.x_star
    m_cut = m_lambda(params)
    grid = np.linspace(0.0, m_cut, grid_size)
    grid[-1] = min(grid[-1], 1.0 - 1e-12)
    vals = _low_lat_values(grid, x, params)
    i = int(np.nanargmax(vals))
    at_zero = float(vals[0])
    at_cutoff = float(vals[-1])
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, grid_size - 1)]

    def f(m: float) -> float:
        return float(_low_lat_values(np.array([m]), x, params)[0])

    arg, top = _golden_max(f, lo, hi)
    if vals[i] > top:
        arg, top = float(grid[i]), float(vals[i])
    return LowLatitudeSup(top, arg, at_zero, at_cutoff)


@functools.lru_cache(maxsize=None)
def _lambda_tr_cached(p: int, k: int, grid_size: int, lambda_max_off: float) -> float:
    lam2 = lambda2(p, k)
    start = max(lam2, 1e-6)  # the sup needs an existing preferred latitude

    def sup_at(lam: float) -> float:
        return float(low_latitude_sup(ModelParams(p, k, lam), grid_size))

    if sup_at(start) <= 1e-9:
        return start
    lo, hi = start, start + 0.25
    while sup_at(hi) > 1e-9:
        lo, hi = hi, hi + 0.25
        if hi > start + lambda_max_off:
            raise ArithmeticError(
                f"low-latitude supremum still positive at snr = {hi:.3f}; "
                "no trivialization bracket found")
    while hi - lo > 1e-4:
        mid = 0.5 * (lo + hi)
        if sup_at(mid) <= 1e-9:
            hi = mid
        else:
            lo = mid
    return float(hi)


def lambda_tr(p: int, k: int, grid_size: int = 2000, lambda_max_off: float = 64.0,
              mono_grid: tuple[float, ...] | None = None) -> ThresholdReport:
    """Trivialization threshold: smallest signal strength at or above lambda2
    for which the low-latitude supremum is nonpositive.

    Bisection in the signal strength to 1e-4; the inner supremum uses a
    2000-point grid with golden-section refinement.  The report also states
    whether the supremum was nonincreasing along mono_grid (default: a grid
    reaching up from just above lambda2); the flag never feeds back into
    the returned threshold.
    """
    _validate_pk(p, k)
    tr = _lambda_tr_cached(p, k, grid_size, lambda_max_off)
    lam2 = lambda2(p, k)
    if mono_grid is None:
        lo = max(lam2, 1e-6) + 0.01
        mono_grid = tuple(float(t) for t in np.linspace(lo, lo + 4.5, 16))
    sups = [float(low_latitude_sup(ModelParams(p, k, lam), grid_size))
            for lam in mono_grid]
    mono = all(b <= a + 1e-9 for a, b in zip(sups, sups[1:]))
    return ThresholdReport(lambda1=lambda1(p, k), lambda2=lam2, lambda_tr=tr,
                           monotonicity_verified=bool(mono),
                           lambda_grid=tuple(mono_grid))


def gse_predict(params: ModelParams) -> GsePrediction:
    """Predicted ground-state energy density and the latitude attaining it.

    Primary form -snr*m^k/k - sqrt(p(1-m^2)) at the preferred latitude; the
    equivalent square-root form is computed independently and must agree to
    1e-10.  Both closed forms of the on-ridge rescaled energy are
    cross-checked the same way.
    """
    ms = m_star(params)
    if ms is None:
        raise ValueError(
            f"no preferred latitude exists at snr={params.snr} for "
            f"(p, k) = ({params.p}, {params.k})")
    p, k, lam = params.p, params.k, params.snr
    x1 = -lam * ms ** k / k - math.sqrt(p * (1.0 - ms * ms))
    x2 = lam * ms ** k * (0.5 - 1.0 / k) - math.sqrt(lam * lam * ms ** (2 * k) / 4.0 + p)
    ys1 = _sc.y_star(ms, params)
    if ms < 1.0:
        ys2 = ((p - 1.0) * ms * ms - p) / (math.sqrt(2.0 * (p - 1)) * math.sqrt(1.0 - ms * ms))
        if abs(ys1 - ys2) > 1e-8 * max(1.0, abs(ys1)):
            raise ArithmeticError("the two on-ridge energy forms disagree")
    return GsePrediction(m_star=ms, x_star=x1, y_star=ys1, gse_alt_form=x2)


def mixture_xi(t: float, m: float, params: ModelParams) -> float:
    """Covariance mixture of the fixed-latitude restriction:
    (m^2 + (1-m^2)t)^p - m^(2p)."""
    p = params.p
    return (m * m + (1.0 - m * m) * t) ** p - m ** (2 * p)


def gse_fixed_latitude(m: float, params: ModelParams) -> float:
    """Energy bound from restricting to a fixed latitude band:
    -snr*m^k/k - sqrt(p(1-m^2)).

    The square root is the slope of the mixture at overlap 1; a finite
    difference of mixture_xi at t = 1 double-checks that slope each call.
    """
    m = float(m)
    if not 0.0 <= m < 1.0:
        raise ValueError("latitude must lie in [0, 1)")
    p, k, lam = params.p, params.k, params.snr
    slope = p * (1.0 - m * m)
    h = 1e-7
    fd = (mixture_xi(1.0 + h, m, params) - mixture_xi(1.0 - h, m, params)) / (2.0 * h)
    if abs(fd - slope) > 1e-5 * max(1.0, slope):
        raise ArithmeticError("mixture slope check failed")
    return -lam * m ** k / k - math.sqrt(slope)


def _validate_pk(p: int, k: int) -> None:
    if int(p) != p or int(k) != k or p < 3 or k < 1:
        raise ValueError(f"need integer p >= 3 and k >= 1, got ({p}, {k})")
