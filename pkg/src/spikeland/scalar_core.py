"""Pure scalar mathematics for the spiked tensor landscape.

Special functions (the bulk-edge rate integral, the edge factor and its
weighted variant), the annealed complexity in both the raw-energy and
rescaled-energy coordinates with all first and second partial derivatives,
the on-ridge restriction and its curvature, the rank-one correction factor,
and overflow-stable Hermite function evaluation with the deep-tail
(beyond-the-bulk) asymptotics.

All operations are pure and reentrant.  Scalar entry points take and return
floats; a few array-valued private helpers back the quadrature code.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .model import ComplexityValue, LandscapePoint, ModelParams

SQRT2 = math.sqrt(2.0)
_LOG_PI = math.log(math.pi)


# ---------------------------------------------------------------------------
# special functions
# ---------------------------------------------------------------------------

_EDGE_GRACE = 1e-12  # closed-boundary band absorbing rounding in composed coordinates


def i1(z: float) -> float:
    """Rate integral of sqrt(t^2 - 2) from sqrt(2) up to z.

    Closed form z*sqrt(z^2-2)/2 - log((z + sqrt(z^2-2))/sqrt(2)) for
    z >= sqrt(2); +inf below sqrt(2) (empty exponential weight there).
    Arguments within 1e-12 below sqrt(2) count as on the boundary, so that
    coordinates composed through rounding still hit the finite limit 0.
    """
    z = float(z)
    if z < SQRT2 - _EDGE_GRACE:
        return math.inf
    d = max(z * z - 2.0, 0.0)
    r = math.sqrt(d)
    return 0.5 * z * r - math.log((z + r) / SQRT2)


def _i1_arr(z: np.ndarray) -> np.ndarray:
    """Vectorized i1; +inf below sqrt(2) (same grace band as i1)."""
    z = np.asarray(z, dtype=float)
    d = np.maximum(z * z - 2.0, 0.0)
    r = np.sqrt(d)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = 0.5 * z * r - np.log((z + r) / SQRT2)
    return np.where(z < SQRT2 - _EDGE_GRACE, np.inf, val)


def h_edge(y: float) -> float:
    """Sum of the two quarter-power edge ratios |y-s2|/|y+s2| and its inverse.

    Tends to 2 both at y = 0 and as |y| grows; diverges at |y| = sqrt(2).
    """
    y = float(y)
    if abs(y) == SQRT2:
        raise ValueError("h_edge has a pole at |y| = sqrt(2)")
    r = abs((y - SQRT2) / (y + SQRT2)) ** 0.25
    return r + 1.0 / r


def _h_edge_arr(y: np.ndarray) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    r = np.abs((y - SQRT2) / (y + SQRT2)) ** 0.25
    return r + 1.0 / r


def h_tilde(y: float) -> float:
    """Edge factor reweighted for the shifted-index tail: sqrt(2)*h/(sqrt(y^2-2)-y).

    Defined (and strictly positive) only below the lower bulk edge y < -sqrt(2).
    """
    y = float(y)
    if not y < -SQRT2:
        raise ValueError("h_tilde requires y < -sqrt(2)")
    return SQRT2 * h_edge(y) / (math.sqrt(y * y - 2.0) - y)


def _h_tilde_arr(y: np.ndarray) -> np.ndarray:
    """Vectorized h_tilde; caller guarantees y < -sqrt(2) elementwise."""
    y = np.asarray(y, dtype=float)
    return SQRT2 * _h_edge_arr(y) / (np.sqrt(y * y - 2.0) - y)


# ---------------------------------------------------------------------------
# energy coordinates
# ---------------------------------------------------------------------------

def y_of(x: float, m: float, params: ModelParams) -> float:
    """Rescaled energy at latitude m: (p*x - (1 - p/k)*snr*m^k)/sqrt(2p(p-1))."""
    p, k, lam = params.p, params.k, params.snr
    return (p * x - (1.0 - p / k) * lam * m ** k) / math.sqrt(2.0 * p * (p - 1))


def x_of(y: float, m: float, params: ModelParams) -> float:
    """Exact inverse of y_of at fixed latitude."""
    p, k, lam = params.p, params.k, params.snr
    return (y * math.sqrt(2.0 * p * (p - 1)) + (1.0 - p / k) * lam * m ** k) / p


def landscape_point(m: float, x: float, params: ModelParams) -> LandscapePoint:
    """Build a LandscapePoint with the rescaled energy filled in consistently."""
    return LandscapePoint(m=float(m), x=float(x), y=y_of(x, m, params))


# ---------------------------------------------------------------------------
# annealed complexity
# ---------------------------------------------------------------------------

def _spike_drift(m: float, params: ModelParams) -> float:
    """Coefficient multiplying -y in the complexity: (snr*m^k/p)*sqrt(2(p-1)/p)."""
    p, k, lam = params.p, params.k, params.snr
    return (lam * m ** k / p) * math.sqrt(2.0 * (p - 1) / p)


def _s_tilde_raw(m, y, params: ModelParams):
    """Complexity in rescaled-energy coordinates; broadcasts over m and y."""
    p, k, lam = params.p, params.k, params.snr
    m = np.asarray(m, dtype=float)
    y = np.asarray(y, dtype=float)
    b = (lam * m ** k / p) * math.sqrt(2.0 * (p - 1) / p)
    quad = 0.5 * np.log((1.0 - m * m) * (p - 1))
    spike2 = (lam * lam * m ** (2 * k - 2) / (2.0 * p * p)) * (p + (1.0 - p) * m * m)
    val = quad + ((2.0 - p) / (2.0 * p)) * y * y - b * y - spike2 - _i1_arr(-y)
    return val


def s_tilde(m: float, y: float, params: ModelParams) -> ComplexityValue:
    """Annealed complexity at latitude m and rescaled energy y.

    NEGATIVE_INFINITY for y above -sqrt(2); the boundary value at exactly
    y = -sqrt(2) is the finite closed-form limit.
    """
    if not abs(m) < 1.0:
        raise ValueError("latitude m must lie strictly inside (-1, 1)")
    val = float(_s_tilde_raw(float(m), float(y), params))
    if math.isinf(val) and val > 0:  # cannot happen; guard against NaN misuse
        raise ArithmeticError("complexity evaluated to +inf")
    return ComplexityValue(value=val if not math.isnan(val) else -math.inf)


def s(m: float, x: float, params: ModelParams) -> ComplexityValue:
    """Annealed complexity at latitude m and energy density x."""
    if not abs(m) < 1.0:
        raise ValueError("latitude m must lie strictly inside (-1, 1)")
    return s_tilde(m, y_of(x, m, params), params)


class Partials(NamedTuple):
    """First and second partial derivatives of the complexity in (m, y)."""

    dy: float
    dyy: float
    dm: float
    dmm: float
    dmy: float


def s_tilde_partials(m: float, y: float, params: ModelParams) -> Partials:
    """Closed-form partials of s_tilde; requires |m| < 1 and y strictly below -sqrt(2)."""
    if not abs(m) < 1.0:
        raise ValueError("latitude m must lie strictly inside (-1, 1)")
    y = float(y)
    if not y < -SQRT2:
        raise ValueError("partials require y < -sqrt(2)")
    p, k, lam = params.p, params.k, params.snr
    m = float(m)
    root = math.sqrt(y * y - 2.0)
    c = math.sqrt(2.0 * (p - 1) / p)
    b = _spike_drift(m, params)

    dy = ((2.0 - p) / p) * y - b + root
    dyy = (2.0 - p) / p + y / root

    one_m2 = 1.0 - m * m
    dm = -m / one_m2 \
        - (lam * k * m ** (k - 1) / p) * c * y \
        + lam * lam * k * (p - 1) * m ** (2 * k - 1) / (p * p)
    dmm = -(1.0 + m * m) / (one_m2 * one_m2) \
        + lam * lam * k * (p - 1) * (2 * k - 1) * m ** (2 * k - 2) / (p * p)
    if k >= 2:
        dm -= lam * lam * (k - 1) * m ** (2 * k - 3) / p
        dmm -= (lam * k * (k - 1) * m ** (k - 2) / p) * c * y
        dmm -= lam * lam * (k - 1) * (2 * k - 3) * m ** (2 * k - 4) / p
    dmy = -(lam * k * m ** (k - 1) / p) * c
    return Partials(dy=dy, dyy=dyy, dm=dm, dmm=dmm, dmy=dmy)


# ---------------------------------------------------------------------------
# the on-ridge restriction
# ---------------------------------------------------------------------------

def y_star(m: float, params: ModelParams) -> float:
    """Rescaled energy maximizing the complexity in y at latitude m.

    Closed form in v = snr*m^k/(2*sqrt(p)).  Below the high-latitude cutoff
    the returned value is the analytic continuation (no interior stationary
    point exists there).
    """
    p, k, lam = params.p, params.k, params.snr
    v = lam * float(m) ** k / (2.0 * math.sqrt(p))
    den = math.sqrt(2.0 * (p - 1))
    return v * (p - 2) / den - (p / den) * math.sqrt(v * v + 1.0)


def _m_lambda(params: ModelParams) -> float:
    """Latitude above which the complexity has an interior maximum in y."""
    p, k, lam = params.p, params.k, params.snr
    if lam <= 0.0:
        return 1.0
    t = ((p - 2) * math.sqrt(p) / (lam * math.sqrt(p - 1.0))) ** (1.0 / k)
    return min(1.0, t)


def g_and_g2(m: float, params: ModelParams) -> tuple[float, float]:
    """On-ridge complexity g(m) = s_tilde(m, y_star(m)) and its curvature.

    The curvature uses the chain rule with analytic partials; the derivative
    of y_star is taken by central differences with step 1e-6*max(1, m)
    (the partial in y vanishes at the stationary point, so no second
    derivative of y_star is needed).  Requires m at or above the
    high-latitude cutoff, where y_star is the genuine interior maximizer.
    """
    m = float(m)
    m_lam = _m_lambda(params)
    if m < m_lam - 1e-12 or not m < 1.0:
        raise ValueError(
            f"g_and_g2 requires latitude in [{m_lam:.6g}, 1), got {m:.6g}")
    ys = y_star(m, params)
    g = float(_s_tilde_raw(m, ys, params))
    step = 1e-6 * max(1.0, m)
    ysp = (y_star(m + step, params) - y_star(m - step, params)) / (2.0 * step)
    part = s_tilde_partials(m, ys, params)
    g2 = part.dmm + 2.0 * part.dmy * ysp + part.dyy * ysp * ysp
    return g, g2


def _y_star_prime(m: float, params: ModelParams) -> float:
    """Exact derivative of y_star in the latitude, from its closed form."""
    p, k, lam = params.p, params.k, params.snr
    m = float(m)
    v = lam * m ** k / (2.0 * math.sqrt(p))
    dv = lam * k * m ** (k - 1) / (2.0 * math.sqrt(p))
    return dv * ((p - 2.0) - p * v / math.sqrt(v * v + 1.0)) \
        / math.sqrt(2.0 * (p - 1))


def _g2_exact(m: float, params: ModelParams) -> float:
    """Ridge curvature by the chain rule with the exact y_star slope.

    Same quantity as the second output of g_and_g2 but free of
    finite-difference noise; used where the curvature enters a delicate
    near-cancellation (the trivialization constant at large signal).
    """
    ys = y_star(m, params)
    ysp = _y_star_prime(m, params)
    part = s_tilde_partials(m, ys, params)
    return part.dmm + 2.0 * part.dmy * ysp + part.dyy * ysp * ysp


def l_of_v(v: float, m: float) -> float:
    """On-ridge complexity reparameterized by the spike variable v.

    Vanishes exactly at v = m^2/(2*sqrt(1-m^2)), its unique interior
    maximum, and is negative elsewhere on (0, inf).
    """
    m = float(m)
    if not 0.0 < m < 1.0:
        raise ValueError("l_of_v requires latitude strictly inside (0, 1)")
    v = float(v)
    w = math.sqrt(v * v + 1.0)
    return 0.5 * math.log1p(-m * m) + (1.0 - 2.0 / (m * m)) * v * v \
        + v * w + math.asinh(v)


def j_factor(m: float, y: float, params: ModelParams) -> float:
    """Rank-one correction weight for the subleading count term.

    Strictly positive; identically 1 at zero signal strength and equal to 1
    at the on-ridge maximizer.
    """
    p, k, lam = params.p, params.k, params.snr
    m = float(m)
    if not abs(m) < 1.0:
        raise ValueError("latitude m must lie strictly inside (-1, 1)")
    expo = -(lam * lam / (2.0 * p * p)) * m ** (2 * k - 2) \
        * (p * (1.0 - m * m) + m * m) \
        - (lam * m ** k * float(y) / (2.0 * p)) * math.sqrt(2.0 * (p - 1) / p)
    return math.exp(expo)


def _j_factor_arr(m: float, y: np.ndarray, params: ModelParams) -> np.ndarray:
    """Vectorized log of j_factor over an array of rescaled energies."""
    p, k, lam = params.p, params.k, params.snr
    y = np.asarray(y, dtype=float)
    return -(lam * lam / (2.0 * p * p)) * m ** (2 * k - 2) \
        * (p * (1.0 - m * m) + m * m) \
        - (lam * m ** k * y / (2.0 * p)) * math.sqrt(2.0 * (p - 1) / p)


# ---------------------------------------------------------------------------
# Hermite functions
# ---------------------------------------------------------------------------

def _phi_carry(n: int, x: float) -> tuple[float, float, float]:
    """Mantissas of the orthonormal Hermite functions at orders n and n-1.

    Returns (w_n, w_{n-1}, L) with phi_j(x) = w_j * exp(L).  The three-term
    recurrence is renormalized whenever the mantissa magnitude leaves
    [1e-150, 1e150], so no intermediate value overflows or underflows.
    """
    x = float(x)
    L = -0.25 * _LOG_PI - 0.5 * x * x
    w_prev = 1.0
    if n == 0:
        return w_prev, 0.0, L
    w = SQRT2 * x
    for j in range(2, n + 1):
        w, w_prev = x * math.sqrt(2.0 / j) * w - math.sqrt((j - 1.0) / j) * w_prev, w
        c = max(abs(w), abs(w_prev))
        if c > 1e150 or (0.0 < c < 1e-150):
            w /= c
            w_prev /= c
            L += math.log(c)
    return w, w_prev, L


def hermite_phi(n: int, x: float) -> float:
    """Orthonormal Hermite function of order n, overflow-stable recurrence."""
    if n < 0:
        raise ValueError("order n must be nonnegative")
    w, _, L = _phi_carry(int(n), x)
    if w == 0.0:
        return 0.0
    lg = L + math.log(abs(w))
    if lg < -745.0:
        return 0.0
    return math.copysign(math.exp(lg), w)


def _phi_log2(n: int, x: float) -> tuple[float, float, float, float]:
    """(sign, log|phi_n|, sign, log|phi_{n-1}|) in one recurrence pass; n >= 1."""
    if n < 1:
        raise ValueError("order n must be >= 1")
    w, w_prev, L = _phi_carry(int(n), x)
    s_n = math.copysign(1.0, w) if w != 0.0 else 0.0
    s_p = math.copysign(1.0, w_prev) if w_prev != 0.0 else 0.0
    lg_n = L + math.log(abs(w)) if w != 0.0 else -math.inf
    lg_p = L + math.log(abs(w_prev)) if w_prev != 0.0 else -math.inf
    return s_n, lg_n, s_p, lg_p


def _phi_log2_arr(n: int, x: np.ndarray):
    """Vectorized _phi_log2 over an array of arguments."""
    if n < 1:
        raise ValueError("order n must be >= 1")
    x = np.asarray(x, dtype=float)
    L = -0.25 * _LOG_PI - 0.5 * x * x
    w_prev = np.ones_like(x)
    w = SQRT2 * x.astype(float)
    for j in range(2, n + 1):
        w, w_prev = x * math.sqrt(2.0 / j) * w - math.sqrt((j - 1.0) / j) * w_prev, w
        c = np.maximum(np.abs(w), np.abs(w_prev))
        mask = (c > 1e150) | ((c < 1e-150) & (c > 0.0))
        if mask.any():
            cm = np.where(mask, c, 1.0)
            w = w / cm
            w_prev = w_prev / cm
            L = L + np.log(cm)
    with np.errstate(divide="ignore"):
        lg_n = np.where(w != 0.0, L + np.log(np.abs(w)), -np.inf)
        lg_p = np.where(w_prev != 0.0, L + np.log(np.abs(w_prev)), -np.inf)
    return np.sign(w), lg_n, np.sign(w_prev), lg_p


def _log_h_norm(n: int) -> float:
    """log of the normalization turning phi_n back into the raw polynomial h_n."""
    return 0.5 * (n * math.log(2.0) + math.lgamma(n + 1.0)) + 0.25 * _LOG_PI


def hermite_h_log(n: int, x: float) -> tuple[float, float]:
    """Sign and log magnitude of the physicists' Hermite polynomial h_n(x)."""
    if n < 0:
        raise ValueError("order n must be nonnegative")
    x = float(x)
    w, _, L = _phi_carry(int(n), x)
    if w == 0.0:
        return 0.0, -math.inf
    sign = math.copysign(1.0, w)
    log_abs = L + math.log(abs(w)) + 0.5 * x * x + _log_h_norm(int(n))
    return sign, log_abs


# ---------------------------------------------------------------------------
# deep-tail asymptotics of the Hermite functions
# ---------------------------------------------------------------------------

def _pr_asymptotic_log(n: int, x: float) -> tuple[float, float]:
    """Leading-order sign and log magnitude of phi_n(sqrt(n)*x), x < -sqrt(2)."""
    x = float(x)
    if not x < -SQRT2:
        raise ValueError("tail asymptotics require x < -sqrt(2)")
    sign = -1.0 if n % 2 else 1.0
    log_abs = -n * i1(-x) + math.log(h_edge(x)) \
        - 0.5 * math.log(4.0 * math.pi * math.sqrt(2.0 * n))
    return sign, log_abs


def pr_asymptotic(n: int, x: float) -> float:
    """Leading-order value of phi_n(sqrt(n)*x) below the lower bulk edge."""
    sign, lg = _pr_asymptotic_log(int(n), x)
    if lg < -745.0:
        return math.copysign(0.0, sign)
    return sign * math.exp(lg)


def _pr_shifted_log(n: int, y: float) -> tuple[float, float]:
    """Leading-order sign and log magnitude of phi_{n-1}(sqrt(n)*y), y < -sqrt(2)."""
    y = float(y)
    if not y < -SQRT2:
        raise ValueError("tail asymptotics require y < -sqrt(2)")
    sign = 1.0 if n % 2 else -1.0
    log_abs = -n * i1(-y) + math.log(h_edge(y)) \
        - math.log(math.sqrt(y * y - 2.0) - y) \
        - 0.5 * math.log(2.0 * math.pi * math.sqrt(2.0 * n))
    return sign, log_abs


def pr_shifted(n: int, y: float) -> float:
    """Leading-order value of phi_{n-1}(sqrt(n)*y) below the lower bulk edge.

    Carries the extra 1/(sqrt(y^2-2) - y) weight produced by evaluating one
    order down at the same scaled argument.
    """
    sign, lg = _pr_shifted_log(int(n), y)
    if lg < -745.0:
        return math.copysign(0.0, sign)
    return sign * math.exp(lg)
