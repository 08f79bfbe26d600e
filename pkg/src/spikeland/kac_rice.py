"""Expected critical-point counts for the spiked landscape.

Four routes to the same object, each validating the next: the exact
finite-size expected Euler characteristic (a two-dimensional integral of a
Gaussian weight against a rank-one-shifted GOE determinant identity), the
two asymptotic integral terms obtained after the deep-tail substitution, the
Laplace saddle of those integrals, and the closed-form sharp constant.

Everything is assembled in log-sign space: at N = 400 the integrands span
hundreds of orders of magnitude.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from . import scalar_core as _sc
from . import thresholds_gse as _tg
from .logquad import LOG_FLOOR, integrate2d_log, signed_logsumexp
from .model import ModelParams

SQRT2 = _sc.SQRT2


@dataclasses.dataclass(frozen=True)
class CountWindow:
    """Open latitude window (m_lo, m_hi) times open energy-density window
    (x_lo, x_hi).

    The raw constructor only checks shape (so diagnostic full-sphere windows
    can be built); the asymptotic operations additionally require
    validate(params): a strictly interior latitude window and an energy
    window deep enough that every rescaled energy sits below -sqrt(2).
    """

    m_lo: float
    m_hi: float
    x_lo: float
    x_hi: float

    def __post_init__(self):
        if not (-1.0 <= self.m_lo < self.m_hi <= 1.0):
            raise ValueError("latitude window must satisfy -1 <= m_lo < m_hi <= 1")
        if not self.x_lo < self.x_hi:
            raise ValueError("energy window must satisfy x_lo < x_hi")

    def deep_energy_bound(self, params: ModelParams) -> float:
        """Upper limit the energy window must stay below for the deep-window
        (all rescaled energies < -sqrt(2)) condition."""
        p, k, lam = params.p, params.k, params.snr
        return -2.0 * math.sqrt((p - 1.0) / p) - abs(1.0 / p - 1.0 / k) * lam

    def validate(self, params: ModelParams) -> None:
        """Raise unless the window qualifies for the asymptotic formulas."""
        if not (-1.0 < self.m_lo and self.m_hi < 1.0):
            raise ValueError(
                "latitude window closure must be contained in (-1, 1); got "
                f"[{self.m_lo}, {self.m_hi}]")
        if not math.isfinite(self.x_lo) or not math.isfinite(self.x_hi):
            raise ValueError("energy window must be bounded")
        bound = self.deep_energy_bound(params)
        if not self.x_hi < bound:
            p, k, lam = params.p, params.k, params.snr
            raise ValueError(
                "energy window too shallow: sup E = "
                f"{self.x_hi:.6g} >= {bound:.6g} = "
                f"-2*sqrt((p-1)/p) - |1/p - 1/k|*snr for (p, k, snr) = "
                f"({p}, {k}, {lam:.6g})")

    def contains(self, m: float, x: float) -> bool:
        return self.m_lo < m < self.m_hi and self.x_lo < x < self.x_hi


def count_window(m_interval, e_interval, params: ModelParams) -> CountWindow:
    """Validated front door: build a CountWindow and check it against params."""
    w = CountWindow(float(m_interval[0]), float(m_interval[1]),
                    float(e_interval[0]), float(e_interval[1]))
    w.validate(params)
    return w


@dataclasses.dataclass(frozen=True)
class KacRiceResult:
    """All count routes evaluated on one window at one size N.

    sharp_value and constant_C are None when their preconditions fail
    (boundary saddle; predicted ground state outside the window).
    """

    term_I: float
    term_II: float
    euler_char_exact: float
    sharp_value: float | None
    saddle_m: float
    saddle_y: float
    constant_C: float | None

    def __post_init__(self):
        if self.sharp_value is not None and not self.sharp_value >= 0.0:
            raise ValueError("sharp asymptotic value must be nonnegative")


def theta(m: float, params: ModelParams) -> float:
    """Strength of the rank-one shift in the conditional Hessian:
    snr*(k-1)*m^(k-2)*(1-m^2)/sqrt(2p(p-1)); identically 0 for k = 1."""
    p, k, lam = params.p, params.k, params.snr
    if k == 1:
        return 0.0
    m = float(m)
    return lam * (k - 1) * m ** (k - 2) * (1.0 - m * m) / math.sqrt(2.0 * p * (p - 1))


def expected_det_rank1(n: int, theta_val: float, y: float) -> tuple[float, float]:
    """Sign and log magnitude of E[det(W_n - theta*e*e^T - y*I)] for GOE W_n.

    Hermite closed form: 2^-n n^(-n/2) h_n(-sqrt(n) y)
    - theta * 2^-(n-1) n^-((n-1)/2) h_{n-1}(-sqrt(n) y), with the empty
    determinant equal to 1 backing the n = 1 case.
    """
    n = int(n)
    if n < 1:
        raise ValueError("matrix size n must be >= 1")
    arg = -math.sqrt(n) * float(y)
    s_n, lp_n, s_p, lp_p = _sc._phi_log2(n, arg)
    half = 0.5 * arg * arg
    lh_n = lp_n + half + _sc._log_h_norm(n)
    lh_p = lp_p + half + _sc._log_h_norm(n - 1)
    logs = [lh_n - n * math.log(2.0) - 0.5 * n * math.log(n)]
    signs = [s_n]
    if theta_val != 0.0:
        logs.append(lh_p + math.log(abs(theta_val))
                    - (n - 1) * math.log(2.0) - 0.5 * (n - 1) * math.log(n))
        signs.append(-math.copysign(1.0, theta_val) * s_p)
    return signed_logsumexp(np.array(logs), np.array(signs))


def _g_n_det_arr(x, m: float, N: int, params: ModelParams):
    """Vectorized sign/log of the Hessian-determinant factor over energies x."""
    p, k, lam = params.p, params.k, params.snr
    x = np.asarray(x, dtype=float)
    y = (p * x - (1.0 - p / k) * lam * m ** k) / math.sqrt(2.0 * p * (p - 1))
    arg = math.sqrt(N) * y
    s1, l1, s0, l0 = _sc._phi_log2_arr(N - 1, arg)
    half = 0.5 * arg * arg
    lh1 = l1 + half + _sc._log_h_norm(N - 1)
    lh0 = l0 + half + _sc._log_h_norm(N - 2)
    th = theta(m, params)
    if th == 0.0:
        tot_s, tot_l = s1, lh1
    else:
        stack_l = np.stack([lh1, lh0 + math.log(2.0 * math.sqrt(N) * abs(th))], axis=-1)
        stack_s = np.stack([s1, math.copysign(1.0, th) * s0], axis=-1)
        tot_s, tot_l = signed_logsumexp(stack_l, stack_s, axis=-1)
    pref_l = 0.5 * (N - 1) * math.log(p * (p - 1) / 2.0)
    pref_s = -1.0 if (N - 1) % 2 else 1.0
    return pref_s * np.asarray(tot_s), np.asarray(tot_l) + pref_l


def g_n_det(x: float, m: float, N: int, params: ModelParams) -> tuple[float, float]:
    """Sign and log magnitude of the exact determinant factor at one point.

    Equals the rank-one-shifted GOE expectation of size N-1 after the
    sqrt(N/(N-1)) rescalings and the (2(N-1)p(p-1))^((N-1)/2) prefactor.
    """
    if N < 2:
        raise ValueError("need N >= 2")
    if not abs(m) < 1.0:
        raise ValueError("latitude m must lie strictly inside (-1, 1)")
    s_, l_ = _g_n_det_arr(np.array([float(x)]), float(m), int(N), params)
    return float(s_[0]), float(l_[0])


def _log_sphere_area(d: int) -> float:
    """log surface area of the unit d-sphere embedded in R^(d+1)."""
    return math.log(2.0) + 0.5 * (d + 1) * math.log(math.pi) \
        - math.lgamma(0.5 * (d + 1))


def _euler_char_log(window: CountWindow, N: int, params: ModelParams,
                    rel_tol: float, abs_tol_log: float) -> tuple[float, float]:
    p, k, lam = params.p, params.k, params.snr
    logpref = _log_sphere_area(N - 2) + 0.5 * math.log(N) \
        - 0.5 * N * math.log(2.0 * math.pi) - 0.5 * (N - 1) * math.log(p)

    def f2(phi: float, x_arr: np.ndarray):
        m = math.sin(phi)
        g_s, g_l = _g_n_det_arr(x_arr, m, N, params)
        gauss = -0.5 * N * (lam * lam * m ** (2 * k - 2) * (1.0 - m * m) / p
                            + (x_arr + lam * m ** k / k) ** 2)
        lg = g_l + gauss
        if N != 2:
            lg = lg + (N - 2) * math.log(max(math.cos(phi), 1e-320))
        return g_s, lg

    phi_lo = math.asin(max(window.m_lo, -1.0))
    phi_hi = math.asin(min(window.m_hi, 1.0))
    trunc = math.sqrt(320.0 / N) + 4.0

    def inner_bounds(phi: float):
        m = math.sin(phi)
        c = -lam * m ** k / k
        return (max(window.x_lo, c - trunc), min(window.x_hi, c + trunc))

    r = integrate2d_log(f2, phi_lo, phi_hi, inner_bounds, rel_tol=rel_tol,
                        abs_tol_log=abs_tol_log)
    return r.sign, r.log_abs + logpref


def expected_euler_char(window: CountWindow, N: int, params: ModelParams,
                        rel_tol: float = 1e-6, abs_tol: float = 0.0) -> float:
    """Exact expected signed critical-point count (Euler characteristic of
    the sublevel window) at finite N, by adaptive log-domain quadrature.

    Valid for any shape-valid window; unbounded energy windows are truncated
    where the Gaussian weight is below working precision.  abs_tol (if
    positive) sets an absolute convergence floor, needed when the true value
    is 0 by cancellation.
    """
    if N < 2:
        raise ValueError("need N >= 2")
    abs_log = math.log(abs_tol) if abs_tol > 0.0 else LOG_FLOOR
    sign, lg = _euler_char_log(window, int(N), params, rel_tol, abs_log)
    if lg == -math.inf:
        return 0.0
    return sign * math.exp(min(lg, 709.0))


def term_integrals(window: CountWindow, N: int, params: ModelParams,
                   rel_tol: float = 1e-6) -> tuple[float, float]:
    """The two asymptotic count terms on a deep window.

    First: (N/(2 pi sqrt(p))) times the integral of
    (1-m^2)^(-3/2) h_tilde(y) exp(N*s_tilde) over the window in (m, y).
    Second: -(snr(N-1)(k-1)/(2 p pi)) times the integral of
    m^(k-2) h_tilde(y) exp((N-1)*s_tilde) J(m, y); identically 0 for k = 1.
    """
    window.validate(params)
    if N < 2:
        raise ValueError("need N >= 2")
    p, k, lam = params.p, params.k, params.snr

    def inner_bounds(m: float):
        return (_sc.y_of(window.x_lo, m, params), _sc.y_of(window.x_hi, m, params))

    def f_bulk(m: float, y: np.ndarray):
        lg = -1.5 * math.log(1.0 - m * m) + np.log(_sc._h_tilde_arr(y)) \
            + N * np.asarray(_sc._s_tilde_raw(m, y, params))
        return np.ones_like(lg), lg

    r1 = integrate2d_log(f_bulk, window.m_lo, window.m_hi, inner_bounds,
                         rel_tol=rel_tol)
    term_one = r1.sign * math.exp(min(r1.log_abs + math.log(N / (2.0 * math.pi * math.sqrt(p))), 709.0)) \
        if r1.log_abs > -math.inf else 0.0

    if k == 1 or lam == 0.0:
        return term_one, 0.0

    def f_spike(m: float, y: np.ndarray):
        base = np.log(_sc._h_tilde_arr(y)) \
            + (N - 1) * np.asarray(_sc._s_tilde_raw(m, y, params)) \
            + _sc._j_factor_arr(m, y, params)
        if k == 2:
            return np.ones_like(base), base
        if m == 0.0:
            return np.zeros_like(base), np.full_like(base, -np.inf)
        sign = math.copysign(1.0, m) ** (k - 2)
        return np.full_like(base, sign), base + (k - 2) * math.log(abs(m))

    r2 = integrate2d_log(f_spike, window.m_lo, window.m_hi, inner_bounds,
                         rel_tol=rel_tol)
    pref = lam * (N - 1) * (k - 1) / (2.0 * p * math.pi)
    term_two = -r2.sign * math.exp(min(r2.log_abs + math.log(pref), 709.0)) \
        if r2.log_abs > -math.inf else 0.0
    return term_one, term_two


def _has_interior_peak(m: float, params: ModelParams) -> bool:
    """Whether the complexity in y has a genuine interior maximum at this
    latitude (the deep-tail drift is strong enough)."""
    p, k, lam = params.p, params.k, params.snr
    return lam * m ** k >= (p - 2.0) * math.sqrt(p / (p - 1.0)) - 1e-15


def _inner_argmax_y(m: float, window: CountWindow, params: ModelParams) -> float:
    y_lo = _sc.y_of(window.x_lo, m, params)
    y_hi = _sc.y_of(window.x_hi, m, params)
    if not _has_interior_peak(m, params):
        return y_hi  # complexity strictly increasing in y below -sqrt(2)
    return min(max(_sc.y_star(m, params), y_lo), y_hi)


def saddle(window: CountWindow, params: ModelParams,
           grid_size: int = 801) -> tuple[float, float, float]:
    """Constrained maximizer (m_o, y_o) of the complexity over the closed
    window in (m, y)-coordinates, and the rate value there.

    Inner maximization is exact (closed-form peak or monotone boundary);
    outer maximization uses a dense grid plus golden-section refinement.
    """
    window.validate(params)

    def val(m: float) -> float:
        m = min(max(m, -1.0 + 1e-12), 1.0 - 1e-12)
        return float(_sc._s_tilde_raw(m, _inner_argmax_y(m, window, params), params))

    grid = np.linspace(window.m_lo, window.m_hi, grid_size)
    vals = np.array([val(m) for m in grid])
    i = int(np.nanargmax(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, grid_size - 1)]
    m_o, rate = _tg._golden_max(val, lo, hi)
    if vals[i] > rate:
        m_o, rate = float(grid[i]), float(vals[i])
    y_o = _inner_argmax_y(m_o, window, params)
    return float(m_o), float(y_o), float(rate)


def _sharp_prefactor(m_o: float, y_o: float, j_val: float,
                     params: ModelParams) -> float:
    p, k, lam = params.p, params.k, params.snr
    dyy = _sc.s_tilde_partials(m_o, y_o, params).dyy
    g2 = _sc._g2_exact(m_o, params)
    if not (dyy < 0.0 and g2 < 0.0):
        raise ValueError("saddle is not a nondegenerate interior maximum")
    bracket = math.sqrt(p) * (1.0 - m_o * m_o) ** -1.5 \
        - lam * (k - 1) * m_o ** (k - 2) * j_val
    return SQRT2 * _sc.h_edge(y_o) * bracket \
        / ((math.sqrt(y_o * y_o - 2.0) - y_o) * p * math.sqrt(abs(dyy * g2)))


def sharp_asymptotic(window: CountWindow, N: int, params: ModelParams) -> float:
    """Closed-form leading asymptotic of the expected count on a deep window
    whose saddle is interior and nondegenerate.

    Raises if the saddle touches the window boundary (margin 1e-8 of the
    width, ties counted as boundary) — use term_integrals there instead.
    """
    m_o, y_o, rate = saddle(window, params)
    wm = 1e-8 * (window.m_hi - window.m_lo)
    if not (window.m_lo + wm < m_o < window.m_hi - wm):
        raise ValueError(
            "saddle latitude lies on the window boundary; the closed-form "
            "leading term does not apply — use term_integrals")
    y_lo = _sc.y_of(window.x_lo, m_o, params)
    y_hi = _sc.y_of(window.x_hi, m_o, params)
    wy = 1e-8 * (y_hi - y_lo)
    if not (y_lo + wy < y_o < y_hi - wy):
        raise ValueError(
            "saddle energy lies on the window boundary; the closed-form "
            "leading term does not apply — use term_integrals")
    j_val = _sc.j_factor(m_o, y_o, params)
    pref = _sharp_prefactor(m_o, y_o, j_val, params)
    return pref * math.exp(min(N * rate, 709.0))


def constant_c(params: ModelParams) -> float:
    """The size-independent limit constant of the expected deep-minima count
    in a window around the predicted ground state.

    Requires the signal strength at or above the latitude-crossing
    threshold; numerically verifies that the rank-one correction weight is
    exactly 1 at the on-ridge maximizer before simplifying it away.

    Every ingredient is evaluated through a well-conditioned channel for the
    latitude complement q = 1 - m*^2 (closed form per k) and the spike
    variable v = snr*m*^k/(2 sqrt(p)): the naive route loses ~snr^2 ulps to
    cancellation, which at snr = 1e4 would swamp the distance of C from its
    limit 1.  The rank-one-weight exponent is checked in the algebraically
    identical form -2 v^2 q / m^2 + v/(v + sqrt(v^2+1)).
    """
    p, k, lam = params.p, params.k, params.snr
    lam2 = _tg.lambda2(p, k)
    if lam < lam2 - 1e-9:
        raise ValueError(
            f"constant requires snr >= {lam2:.6g} (latitude crossing); got {lam}")
    m_s = _tg.m_star(params)
    if k == 1:
        q = p / (lam * lam + p)
    elif k == 2:
        q = p / (lam * lam)
    else:
        q = p / (lam * lam * m_s ** (2 * (k - 2)))
    m2 = 1.0 - q
    v = lam * m_s ** k / (2.0 * math.sqrt(p))
    w = math.sqrt(v * v + 1.0)
    den = math.sqrt(2.0 * (p - 1))
    y_s = (v * (p - 2.0) - p * w) / den
    j_exponent = -2.0 * v * v * q / m2 + v / (v + w)
    if abs(math.expm1(j_exponent)) > 1e-10:
        raise ArithmeticError(
            "rank-one weight at the on-ridge maximizer is "
            f"{math.exp(j_exponent)}, not 1")
    dyy = (2.0 - p) / p + y_s / math.sqrt(y_s * y_s - 2.0)
    dmy = -(2.0 * math.sqrt(p) * v * k / (m_s * p)) * math.sqrt(2.0 * (p - 1) / p)
    dmm = -(1.0 + m2) / (q * q) + 4.0 * v * v * k * (p - 1) * (2 * k - 1) / (m2 * p)
    if k >= 2:
        dmm += -(k * (k - 1) / p) * (2.0 * math.sqrt(p) * v / m2) \
            * math.sqrt(2.0 * (p - 1) / p) * y_s \
            - 4.0 * v * v * (k - 1) * (2 * k - 3) / (m2 * m2)
    ysp = (k * v / m_s) * (-2.0 + p / (w * (w + v))) / den
    g2 = dmm + 2.0 * dmy * ysp + dyy * ysp * ysp
    if not (dyy < 0.0 and g2 < 0.0):
        raise ArithmeticError("ridge maximizer is not a nondegenerate maximum")
    bracket = math.sqrt(p) * q ** -1.5 - lam * (k - 1) * m_s ** (k - 2)
    return SQRT2 * _sc.h_edge(y_s) * bracket \
        / ((math.sqrt(y_s * y_s - 2.0) - y_s) * p * math.sqrt(abs(dyy * g2)))


def window_report(window: CountWindow, N: int, params: ModelParams,
                  rel_tol: float = 1e-6) -> KacRiceResult:
    """Evaluate every route on one deep window: the two asymptotic terms,
    the exact expected Euler characteristic, the closed-form leading term
    (None on a boundary saddle), and the limit constant (None unless the
    predicted ground state lies inside the window)."""
    window.validate(params)
    t1, t2 = term_integrals(window, N, params, rel_tol=rel_tol)
    exact = expected_euler_char(window, N, params, rel_tol=rel_tol)
    m_o, y_o, _rate = saddle(window, params)
    try:
        sharp = sharp_asymptotic(window, N, params)
    except ValueError:
        sharp = None
    const = None
    try:
        pred = _tg.gse_predict(params)
        if window.contains(pred.m_star, pred.x_star) \
                and params.snr >= _tg.lambda2(params.p, params.k) - 1e-9:
            const = constant_c(params)
    except ValueError:
        const = None
    return KacRiceResult(term_I=t1, term_II=t2, euler_char_exact=exact,
                         sharp_value=sharp, saddle_m=m_o, saddle_y=y_o,
                         constant_C=const)
