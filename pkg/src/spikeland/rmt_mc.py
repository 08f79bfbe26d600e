"""Monte Carlo ground truth for the random-matrix identities.

GOE sampling, empirical expected determinants of rank-one-shifted matrices,
an independent oscillatory-integral route to the same expectation, error
curves for the deep-tail Hermite asymptotics, and sampling of the
conditional Hessian law at a fixed latitude and energy.

Normalization: W = (G + G^T)/(2 sqrt(n)) with G i.i.d. standard normal,
giving off-diagonal variance 1/(2n) and diagonal variance 1/n, so that the
spectrum edge sits at +-sqrt(2) and E[det(W_n + sI)] equals
2^-n n^(-n/2) h_n(sqrt(n) s).  This is the unique normalization consistent
with the Hermite determinant identity and the deep-tail thresholds used
throughout the package.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from . import scalar_core as _sc
from .kac_rice import expected_det_rank1
from .model import ModelParams
from .rng import substream

SQRT2 = _sc.SQRT2


@dataclasses.dataclass(frozen=True)
class GoeSpec:
    """Size, seed, and sample count for a reproducible GOE stream."""

    n: int
    seed: int
    samples: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("matrix size n must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.samples < 1:
            raise ValueError("samples must be positive")


@dataclasses.dataclass(frozen=True)
class McEstimate:
    """Monte Carlo mean with its standard error over i.i.d. units."""

    mean: float
    stderr: float
    samples: int

    def __post_init__(self):
        if self.samples < 2:
            raise ValueError("an estimate needs at least 2 samples")
        if not self.stderr >= 0.0:
            raise ValueError("stderr must be nonnegative")


def _goe_batch(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """(count, n, n) batch of symmetric matrices in the package convention."""
    g = rng.standard_normal((count, n, n))
    return (g + g.transpose(0, 2, 1)) / (2.0 * math.sqrt(n))


def sample_goe(spec: GoeSpec):
    """Yield spec.samples symmetric GOE matrices, reproducibly per seed."""
    rng = substream(spec.seed, 0)
    remaining = spec.samples
    batch = max(1, min(4096, int(2e7 // (spec.n * spec.n)) or 1))
    while remaining > 0:
        take = min(batch, remaining)
        for w in _goe_batch(spec.n, take, rng):
            yield w
        remaining -= take


_DET_DIRECT_MAX = 30  # direct determinant is safe below this size


def _batch_dets(a: np.ndarray) -> np.ndarray:
    n = a.shape[-1]
    if n <= _DET_DIRECT_MAX:
        return np.linalg.det(a)
    sign, logabs = np.linalg.slogdet(a)
    return sign * np.exp(logabs)


def mc_expected_det(n: int, theta: float, y: float, spec: GoeSpec) -> McEstimate:
    """Monte Carlo estimate of E[det(W_n - theta*e*e^T - y*I)].

    The rank-one shift acts on the last coordinate (any fixed unit vector is
    equivalent by orthogonal invariance).  Batches are drawn from
    substream(seed, batch_index) with a fixed batch size, so the result is
    independent of how work would be distributed over threads.  When n is
    odd and theta = 0, each matrix is paired with its negation (det is odd
    under negation there), and pair means are the i.i.d. units.
    """
    n = int(n)
    if n < 1:
        raise ValueError("matrix size n must be >= 1")
    theta = float(theta)
    y = float(y)
    # Size 1 is excluded from the pairing: there the pair mean collapses to
    # the constant -y, leaving only roundoff in the reported stderr.
    antithetic = (n % 2 == 1) and n >= 3 and theta == 0.0
    batch = max(1, min(200_000, int(2e7 // (n * n))))
    chunks = []
    done = 0
    idx = 0
    eye = np.eye(n)
    while done < spec.samples:
        take = min(batch, spec.samples - done)
        w = _goe_batch(n, take, substream(spec.seed, idx))
        a = w - y * eye
        if theta != 0.0:
            a = a.copy()
            a[:, -1, -1] -= theta
        vals = _batch_dets(a)
        if antithetic:
            vals = 0.5 * (vals + _batch_dets(-w - y * eye))
        chunks.append(vals)
        done += take
        idx += 1
    units = np.concatenate(chunks)
    mean = float(np.mean(units))
    stderr = float(np.std(units, ddof=1) / math.sqrt(units.size))
    return McEstimate(mean=mean, stderr=stderr, samples=int(units.size))


def char_integral_det(n: int, f: float, s: float) -> float:
    """E[det(W_n - f*e*e^T + s*I)] through the oscillatory Fourier integral
    (-i/sqrt(n))^n pi^(-1/2) e^(n s^2)
    int e^(-y^2) (y^n - i sqrt(n) f y^(n-1)) e^(2 sqrt(n) i y s) dy,
    an independent route to the same value as expected_det_rank1(n, f, -s).

    Evaluated in adaptive high-precision arithmetic: the e^(n s^2) prefactor
    cancels against the integral, costing ~n s^2/ln 10 digits, so the
    working precision is raised accordingly and the integration range is
    split into roughly one segment per oscillation period.  Restricted to
    2 <= n <= 40 where the quadrature is trustworthy.
    """
    import mpmath as mp

    n = int(n)
    if not 2 <= n <= 40:
        raise ValueError("char_integral_det supports 2 <= n <= 40")
    f = float(f)
    s = float(s)
    eps = 1e-14
    L = math.sqrt(2.0 * math.log(1.0 / eps)) + 2.0 * math.sqrt(n) * abs(s)
    dps = 25 + int(n * s * s / math.log(10.0)) + 10
    with mp.workdps(dps):
        sqn = mp.sqrt(n)
        f_mp = mp.mpf(f)
        s_mp = mp.mpf(s)

        def integrand(yv):
            osc = mp.expj(2 * sqn * yv * s_mp)
            poly = yv ** n - 1j * sqn * f_mp * yv ** (n - 1)
            return mp.e ** (-yv * yv) * poly * osc

        if s == 0.0:
            points = [-mp.mpf(L), mp.mpf(L)]
        else:
            period = math.pi / (math.sqrt(n) * abs(s))
            n_seg = min(4000, max(4, int(math.ceil(2.0 * L / period))))
            points = [mp.mpf(-L) + mp.mpf(2 * L) * i / n_seg
                      for i in range(n_seg + 1)]
        integral = mp.quad(integrand, points)
        pref = (-1j / sqn) ** n / mp.sqrt(mp.pi) * mp.e ** (n * s_mp * s_mp)
        total = pref * integral
        re = float(mp.re(total))
        im = float(mp.im(total))
    if abs(im) > 1e-8 * max(1.0, abs(re)):
        raise ArithmeticError(
            f"residual imaginary part {im:.3e} exceeds tolerance; the "
            "oscillatory quadrature did not converge")
    return re


def pr_error_curve(x: float, n_list, shifted: bool = False):
    """Relative error of the deep-tail asymptote against the directly
    recurred Hermite function, per order.

    With shifted=True the comparison targets the order-(n-1) function and
    its shifted asymptote instead.  Ratios are formed in the log domain so
    the curve is meaningful even where both values underflow.
    """
    x = float(x)
    if not x < -SQRT2 - 0.05:
        raise ValueError(
            "x must sit below -sqrt(2) - 0.05 (uniform validity window)")
    out = []
    for n in n_list:
        n = int(n)
        if n < 10:
            raise ValueError("orders below 10 are outside the asymptotic range")
        arg = math.sqrt(n) * x
        s_n, lg_n, s_p, lg_p = _sc._phi_log2(n, arg)
        if shifted:
            s_pr, lg_pr = _sc._pr_shifted_log(n, x)
            s_d, lg_d = s_p, lg_p
        else:
            s_pr, lg_pr = _sc._pr_asymptotic_log(n, x)
            s_d, lg_d = s_n, lg_n
        ratio = s_d * s_pr * math.exp(lg_d - lg_pr)
        out.append((n, abs(ratio - 1.0)))
    return out


def sample_conditional_hessian(m: float, x: float, N: int,
                               params: ModelParams, spec: GoeSpec):
    """Yield (N-1)x(N-1) samples of the Hessian law conditional on a
    critical point at latitude m with energy density x:
    sqrt(2(N-1)p(p-1)) W - snr sqrt(N) (k-1) m^(k-2) (1-m^2) e e^T
    + sqrt(N) (-p x + (1 - p/k) snr m^k) I, rank-one on the last coordinate.
    """
    N = int(N)
    if N < 2:
        raise ValueError("need N >= 2")
    m = float(m)
    if not abs(m) < 1.0:
        raise ValueError("latitude m must lie strictly inside (-1, 1)")
    if spec.n != N - 1:
        raise ValueError(f"spec.n must equal N - 1 = {N - 1}, got {spec.n}")
    p, k, lam = params.p, params.k, params.snr
    scale = math.sqrt(2.0 * (N - 1) * p * (p - 1))
    rank1 = lam * math.sqrt(N) * (k - 1) * m ** (k - 2) * (1.0 - m * m) \
        if k >= 2 else 0.0
    shift = math.sqrt(N) * (-p * x + (1.0 - p / k) * lam * m ** k)
    eye = np.eye(N - 1)
    for w in sample_goe(spec):
        h = scale * w + shift * eye
        h[-1, -1] -= rank1
        yield h
