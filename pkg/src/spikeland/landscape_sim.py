"""Direct simulation of the spiked-tensor energy landscape on the sphere.

This module works with explicit random instances of the energy function

    H(sigma) = -N^{(1-p)/2} * sum_{i_1..i_p} J_{i_1..i_p} sigma_{i_1}...sigma_{i_p}
               - (lam * N / k) * (<sigma, v0_hat> / sqrt(N))^k

for ``sigma`` on the sphere of radius sqrt(N), with i.i.d. standard normal
couplings ``J`` (stored exactly as drawn, without symmetrisation) and the unit
spike direction ``v0_hat`` fixed to the last coordinate axis.  The rescaled
per-replica energy on the unit sphere is ``f(s) = H(sqrt(N) s)/sqrt(N)``.

Provided here:

* instance sampling with a deterministic splittable seed and a memory budget,
* exact evaluation plus spherical gradient / Hessian (tangent projection with
  the radial curvature correction),
* a Monte Carlo validator for the joint first/second-moment structure of
  ``(f, grad f, hess f)`` at a point of prescribed overlap with the spike,
* multi-start projected gradient descent for the ground state,
* an exhaustive critical-point census on the circle (dimension 2), with a
  batched high-throughput variant used for large instance ensembles,
* a Hessian-index profile for located critical points, and
* a portable binary serialisation of instances.
"""

from __future__ import annotations

import dataclasses
import math
import struct
from typing import NamedTuple, Sequence

import numpy as np

from .model import ModelParams
from .rng import substream

_COUPLING_BUDGET = 10**8
_MAGIC = b"SPIKETEN"
_FORMAT_VERSION = 1
_HEADER = struct.Struct("<8sQQQQdQ")

# Chunk sizes are part of the determinism contract: results depend only on the
# seed and the argument values, never on available memory.
_COV_CHUNK = 5_000
_CENSUS_CHUNK = 20_000

_SEED_BOUND = 2**64


def _check_seed(seed: int) -> int:
    if not isinstance(seed, (int, np.integer)):
        raise TypeError(f"seed must be an integer, got {type(seed).__name__}")
    if not 0 <= int(seed) < _SEED_BOUND:
        raise ValueError(f"seed must lie in [0, 2^64), got {seed}")
    return int(seed)


# ---------------------------------------------------------------------------
# Instance container
# ---------------------------------------------------------------------------


@dataclasses.dataclass(eq=False)
class HamiltonianInstance:
    """One realisation of the random energy landscape.

    ``couplings`` holds the order-``p`` Gaussian tensor exactly as drawn
    (no symmetrisation; the energy sums over all index tuples).  The spike
    direction is a unit vector, fixed to the last coordinate axis by
    :func:`sample_instance`; isotropy of the noise makes this lossless.
    """

    n_dim: int
    params: ModelParams
    seed: int
    couplings: np.ndarray
    spike_direction: np.ndarray
    _sym_cache: np.ndarray | None = dataclasses.field(
        default=None, init=False, repr=False
    )

    def __post_init__(self) -> None:
        n, p = self.n_dim, self.params.p
        if not isinstance(n, (int, np.integer)) or n < 2:
            raise ValueError(f"dimension must be an integer >= 2, got {self.n_dim}")
        self.n_dim = int(n)
        self.seed = _check_seed(self.seed)
        self.couplings = np.asarray(self.couplings, dtype=float)
        if self.couplings.shape != (self.n_dim,) * p:
            raise ValueError(
                f"couplings must have shape {(self.n_dim,) * p}, "
                f"got {self.couplings.shape}"
            )
        self.spike_direction = np.asarray(self.spike_direction, dtype=float)
        if self.spike_direction.shape != (self.n_dim,):
            raise ValueError("spike_direction must be a length-n vector")
        if abs(float(self.spike_direction @ self.spike_direction) - 1.0) > 1e-12:
            raise ValueError("spike_direction must be a unit vector")

    def _symmetrized(self) -> np.ndarray | None:
        """Symmetrised coupling tensor, cached; None when too costly."""
        if self._sym_cache is not None:
            return self._sym_cache
        p = self.params.p
        n_perms = math.factorial(p)
        if n_perms > 720 or n_perms * self.couplings.size > 2 * 10**9:
            return None
        import itertools

        acc = np.zeros_like(self.couplings)
        for perm in itertools.permutations(range(p)):
            acc += np.transpose(self.couplings, perm)
        acc /= n_perms
        self._sym_cache = acc
        return acc


def sample_instance(n_dim: int, params: ModelParams, seed: int) -> HamiltonianInstance:
    """Draw one landscape instance: i.i.d. N(0,1) couplings, spike = last axis.

    The memory budget caps the coupling count at ``n_dim**p <= 10**8``.
    Couplings come from stream 0 of the instance seed; optimiser restarts and
    other consumers use disjoint streams of the same seed.
    """
    if not isinstance(n_dim, (int, np.integer)) or n_dim < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {n_dim}")
    n_dim = int(n_dim)
    seed = _check_seed(seed)
    size = n_dim**params.p
    if size > _COUPLING_BUDGET:
        raise ValueError(
            f"coupling tensor would need {size} entries "
            f"(budget {_COUPLING_BUDGET}); reduce the dimension or the tensor order"
        )
    rng = substream(seed, 0)
    couplings = rng.standard_normal(size=(n_dim,) * params.p)
    spike = np.zeros(n_dim)
    spike[-1] = 1.0
    return HamiltonianInstance(
        n_dim=n_dim, params=params, seed=seed, couplings=couplings, spike_direction=spike
    )


# ---------------------------------------------------------------------------
# Evaluation and spherical derivatives
# ---------------------------------------------------------------------------


def _noise_value(couplings: np.ndarray, s_hat: np.ndarray) -> float:
    """Full contraction sum_{tuples} J * prod(s_hat)."""
    p = couplings.ndim
    ops: list = [couplings, list(range(1, p + 1))]
    for t in range(p):
        ops.extend([s_hat, [t + 1]])
    ops.append([])
    return float(np.einsum(*ops))


def _noise_grad(instance: HamiltonianInstance, s_hat: np.ndarray) -> np.ndarray:
    """d/ds of the full contraction at ``s_hat`` (Euclidean, length n)."""
    p = instance.params.p
    sym = instance._symmetrized()
    if sym is not None:
        ops: list = [sym, list(range(1, p + 1))]
        for t in range(1, p):
            ops.extend([s_hat, [t + 1]])
        ops.append([1])
        return p * np.einsum(*ops)
    total = np.zeros(instance.n_dim)
    for free in range(p):
        ops = [instance.couplings, list(range(1, p + 1))]
        for t in range(p):
            if t != free:
                ops.extend([s_hat, [t + 1]])
        ops.append([free + 1])
        total += np.einsum(*ops)
    return total


def _noise_hess(instance: HamiltonianInstance, s_hat: np.ndarray) -> np.ndarray:
    """d2/ds2 of the full contraction at ``s_hat`` (Euclidean, n x n)."""
    p = instance.params.p
    n = instance.n_dim
    if p == 2:  # pragma: no cover - order >= 3 enforced by ModelParams
        raise AssertionError("tensor order below 3 is not representable")
    sym = instance._symmetrized()
    if sym is not None:
        ops: list = [sym, list(range(1, p + 1))]
        for t in range(2, p):
            ops.extend([s_hat, [t + 1]])
        ops.append([1, 2])
        return p * (p - 1) * np.einsum(*ops)
    total = np.zeros((n, n))
    for a in range(p):
        for b in range(a + 1, p):
            ops = [instance.couplings, list(range(1, p + 1))]
            for t in range(p):
                if t != a and t != b:
                    ops.extend([s_hat, [t + 1]])
            ops.append([a + 1, b + 1])
            block = np.einsum(*ops)
            total += block + block.T
    return total


def _eval_f(instance: HamiltonianInstance, s_hat: np.ndarray) -> float:
    """Rescaled energy on the unit sphere (no sphere check; internal)."""
    par = instance.params
    m = float(s_hat @ instance.spike_direction)
    spike = (par.snr * math.sqrt(instance.n_dim) / par.k) * m**par.k
    return -_noise_value(instance.couplings, s_hat) - spike


def _grad_eucl_f(instance: HamiltonianInstance, s_hat: np.ndarray) -> np.ndarray:
    """Euclidean gradient of the rescaled energy at a unit-sphere point."""
    par = instance.params
    m = float(s_hat @ instance.spike_direction)
    coef = par.snr * math.sqrt(instance.n_dim) * m ** (par.k - 1)
    return -_noise_grad(instance, s_hat) - coef * instance.spike_direction


def _hess_eucl_f(instance: HamiltonianInstance, s_hat: np.ndarray) -> np.ndarray:
    """Euclidean Hessian of the rescaled energy at a unit-sphere point."""
    par = instance.params
    hess = -_noise_hess(instance, s_hat)
    if par.k >= 2:
        m = float(s_hat @ instance.spike_direction)
        coef = par.snr * math.sqrt(instance.n_dim) * (par.k - 1) * m ** (par.k - 2)
        hess -= coef * np.outer(instance.spike_direction, instance.spike_direction)
    return hess


def _check_on_sphere(instance: HamiltonianInstance, sigma: np.ndarray) -> np.ndarray:
    sigma = np.asarray(sigma, dtype=float)
    if sigma.shape != (instance.n_dim,):
        raise ValueError(f"configuration must be a length-{instance.n_dim} vector")
    if abs(float(sigma @ sigma) - instance.n_dim) > 1e-8:
        raise ValueError(
            "configuration must lie on the sphere of squared radius equal to the "
            f"dimension (|sigma|^2 = {float(sigma @ sigma)!r}, want {instance.n_dim})"
        )
    return sigma


def eval_h(instance: HamiltonianInstance, sigma: np.ndarray) -> float:
    """Energy at ``sigma`` on the sphere of radius sqrt(n).

    Evaluated directly in the extensive normalisation
    ``-n^{(1-p)/2} * contraction - (lam n / k) m^k`` with
    ``m = <sigma, spike>/sqrt(n)``; at ``sigma = sqrt(n) * spike`` this is
    exactly ``-sqrt(n) * J_{n..n} - lam n / k``.
    """
    sigma = _check_on_sphere(instance, sigma)
    n, par = instance.n_dim, instance.params
    m = float(sigma @ instance.spike_direction) / math.sqrt(n)
    noise = n ** ((1 - par.p) / 2) * _noise_value(instance.couplings, sigma)
    return -noise - (par.snr * n / par.k) * m**par.k


def eval_f(instance: HamiltonianInstance, s_hat: np.ndarray) -> float:
    """Rescaled energy at a point of the unit sphere.

    Satisfies ``sqrt(n) * eval_f(s) == eval_h(sqrt(n) * s)`` up to rounding;
    the two are computed through different normalisation paths.
    """
    s_hat = np.asarray(s_hat, dtype=float)
    if s_hat.shape != (instance.n_dim,):
        raise ValueError(f"configuration must be a length-{instance.n_dim} vector")
    if abs(float(s_hat @ s_hat) - 1.0) > 1e-8:
        raise ValueError("configuration must lie on the unit sphere")
    return _eval_f(instance, s_hat)


def grad_sphere(instance: HamiltonianInstance, sigma: np.ndarray) -> np.ndarray:
    """Spherical (tangent) gradient of the energy on the radius-sqrt(n) sphere.

    The Euclidean gradient of the energy at ``sigma`` equals the Euclidean
    gradient of the rescaled energy at ``sigma/sqrt(n)``; it is returned
    projected onto the tangent space, so ``<result, sigma> = 0``.
    """
    sigma = _check_on_sphere(instance, sigma)
    n = instance.n_dim
    g = _grad_eucl_f(instance, sigma / math.sqrt(n))
    return g - (float(g @ sigma) / n) * sigma


def hess_sphere(instance: HamiltonianInstance, sigma: np.ndarray) -> np.ndarray:
    """Covariant (spherical) Hessian of the energy, as an n x n matrix.

    For tangent vectors ``u`` the quadratic form ``u' H u`` equals the second
    derivative of the energy along the metric-projection retraction
    ``t -> sqrt(n) (sigma + t u)/|sigma + t u|``; rows and columns in the
    radial direction vanish.  The radial correction enters with the factor
    ``<grad_eucl, sigma>/n`` appropriate for squared radius ``n``.
    """
    sigma = _check_on_sphere(instance, sigma)
    n = instance.n_dim
    s_hat = sigma / math.sqrt(n)
    g = _grad_eucl_f(instance, s_hat)
    a = _hess_eucl_f(instance, s_hat) / math.sqrt(n)
    proj = np.eye(n) - np.outer(sigma, sigma) / n
    core = proj @ a @ proj
    radial = float(g @ sigma) / n
    return core - radial * proj


# ---------------------------------------------------------------------------
# Moment-structure Monte Carlo
# ---------------------------------------------------------------------------


class MomentCheck(NamedTuple):
    """One validated moment: estimate vs exact value with its z-score."""

    name: str
    estimate: float
    target: float
    stderr: float
    z: float


@dataclasses.dataclass(frozen=True)
class CovarianceReport:
    """Summary of the first/second-moment Monte Carlo validation."""

    n_dim: int
    params: ModelParams
    overlap: float
    samples: int
    n_moments: int
    worst: MomentCheck
    violations: tuple[MomentCheck, ...]
    passed: bool


def _batched_noise_derivatives(
    j_batch: np.ndarray, s_hat: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Value, Euclidean gradient and Hessian of the batched full contraction.

    ``j_batch`` has shape ``(B,) + (n,)*p``; the evaluation point is shared.
    Returns arrays of shapes ``(B,)``, ``(B, n)`` and ``(B, n, n)``.
    """
    p = j_batch.ndim - 1
    n = j_batch.shape[1]
    batch = j_batch.shape[0]

    ops: list = [j_batch, [0] + list(range(1, p + 1))]
    for t in range(p):
        ops.extend([s_hat, [t + 1]])
    ops.append([0])
    value = np.einsum(*ops)

    grad = np.zeros((batch, n))
    for free in range(p):
        ops = [j_batch, [0] + list(range(1, p + 1))]
        for t in range(p):
            if t != free:
                ops.extend([s_hat, [t + 1]])
        ops.append([0, free + 1])
        grad += np.einsum(*ops)

    hess = np.zeros((batch, n, n))
    for a in range(p):
        for b in range(a + 1, p):
            ops = [j_batch, [0] + list(range(1, p + 1))]
            for t in range(p):
                if t != a and t != b:
                    ops.extend([s_hat, [t + 1]])
            ops.append([0, a + 1, b + 1])
            block = np.einsum(*ops)
            hess += block + np.swapaxes(block, 1, 2)
    return value, grad, hess


def _covariance_targets(
    n_dim: int, params: ModelParams, overlap: float
) -> tuple[np.ndarray, np.ndarray, list[str]]:
    """Exact mean vector and covariance matrix of (f, grad f, hess f).

    Components are taken in a tangent basis at the evaluation point whose
    last vector points along the direction of increasing overlap; the Hessian
    contributes its upper triangle, rows-first.
    """
    n = n_dim
    p, k, lam = params.p, params.k, params.snr
    m = overlap
    root_n = math.sqrt(n)
    d_grad = n - 1
    iu, ju = np.triu_indices(d_grad)
    d_hess = iu.size
    dim = 1 + d_grad + d_hess

    names = ["f"]
    names += [f"grad[{i}]" for i in range(d_grad)]
    names += [f"hess[{i},{j}]" for i, j in zip(iu, ju)]

    mean = np.zeros(dim)
    mean[0] = -lam * root_n * m**k / k
    # Gradient mean: along the overlap direction, the last tangent vector.
    mean[d_grad] = -root_n * lam * m ** (k - 1) * math.sqrt(1.0 - m * m)
    # Hessian mean: lam sqrt(n) m^k on the diagonal, minus the rank-one spike
    # curvature on the (overlap, overlap) entry.
    spike_curv = 0.0
    if k >= 2:
        spike_curv = root_n * lam * (k - 1) * m ** (k - 2) * (1.0 - m * m)
    hess_mean = np.zeros((d_grad, d_grad))
    np.fill_diagonal(hess_mean, root_n * lam * m**k)
    hess_mean[d_grad - 1, d_grad - 1] -= spike_curv
    mean[1 + d_grad :] = hess_mean[iu, ju]

    cov = np.zeros((dim, dim))
    cov[0, 0] = 1.0
    for a in range(d_grad):
        cov[1 + a, 1 + a] = p
    for r, (i, j) in enumerate(zip(iu, ju)):
        cov[0, 1 + d_grad + r] = cov[1 + d_grad + r, 0] = -p if i == j else 0.0
        for r2, (i2, j2) in enumerate(zip(iu, ju)):
            val = p * (p - 1) * (
                int(i == i2) * int(j == j2) + int(i == j2) * int(j == i2)
            ) + p * p * int(i == j) * int(i2 == j2)
            cov[1 + d_grad + r, 1 + d_grad + r2] = val
    return mean, cov, names


def covariance_mc(
    n_dim: int,
    params: ModelParams,
    samples: int,
    seed: int,
    overlap: float = 0.5,
) -> CovarianceReport:
    """Validate the exact joint moment structure of (f, grad f, hess f).

    Draws ``samples`` independent coupling tensors, evaluates the rescaled
    energy with its spherical gradient and Hessian at a unit-sphere point of
    the given overlap with the spike, and compares every first moment and
    every covariance entry with its closed form:

    * ``E[f] = -lam sqrt(n) m^k / k``, ``Var(f) = 1``,
    * ``E[grad f]`` supported on the overlap direction with value
      ``-sqrt(n) lam m^{k-1} sqrt(1-m^2)``,
    * ``Cov(grad, grad) = p I``, ``Cov(hess, f) = -p I``,
    * ``Cov(f, grad) = 0``, ``Cov(hess, grad) = 0``,
    * ``Cov(hess_ij, hess_kl) = p(p-1)(d_ik d_jl + d_il d_jk) + p^2 d_ij d_kl``,
    * ``E[hess]`` = ``lam sqrt(n) m^k I`` minus the rank-one spike curvature.

    Every check must land within three standard errors; the report records the
    worst deviation.  The first draws are additionally cross-checked against
    the scalar :func:`eval_h` / :func:`grad_sphere` / :func:`hess_sphere`
    route on the radius-sqrt(n) sphere.
    """
    if n_dim < 3:
        raise ValueError(f"dimension must be >= 3, got {n_dim}")
    if samples < 10**4:
        raise ValueError(f"need at least 10^4 samples, got {samples}")
    if not -1.0 < overlap < 1.0:
        raise ValueError(f"overlap must lie strictly inside (-1, 1), got {overlap}")
    seed = _check_seed(seed)
    n, p, k, lam = n_dim, params.p, params.k, params.snr
    root_n = math.sqrt(n)
    m = float(overlap)
    w = math.sqrt(1.0 - m * m)

    spike = np.zeros(n)
    spike[-1] = 1.0
    s_hat = np.zeros(n)
    s_hat[-1] = m
    s_hat[-2] = w
    # Tangent basis at s_hat: coordinate axes 1..n-2 plus the in-plane unit
    # vector along which the overlap increases.
    basis = np.zeros((n, n - 1))
    for i in range(n - 2):
        basis[i, i] = 1.0
    basis[-1, -1] = w
    basis[-2, -1] = -m

    proj = np.eye(n) - np.outer(s_hat, s_hat)
    iu, ju = np.triu_indices(n - 1)
    spike_mean_grad = -lam * root_n * m ** (k - 1) * spike
    spike_curv = lam * root_n * (k - 1) * m ** (k - 2) if k >= 2 else 0.0
    spike_const = (lam * root_n / k) * m**k

    rows = []
    done = 0
    chunk_idx = 0
    first_batch: np.ndarray | None = None
    while done < samples:
        count = min(_COV_CHUNK, samples - done)
        rng = substream(seed, chunk_idx)
        j_batch = rng.standard_normal(size=(count,) + (n,) * p)
        if chunk_idx == 0:
            first_batch = j_batch[:2].copy()
        value, grad, hess = _batched_noise_derivatives(j_batch, s_hat)
        f_vals = -value - spike_const
        g_eucl = -grad + spike_mean_grad
        a_eucl = -hess
        if spike_curv != 0.0:
            a_eucl[:, -1, -1] -= spike_curv
        radial = g_eucl @ s_hat
        g_tan = g_eucl - radial[:, None] * s_hat
        core = np.einsum("ij,bjk,kl->bil", proj, a_eucl, proj)
        h_tan = core - radial[:, None, None] * proj
        g_comp = g_tan @ basis
        h_comp = np.einsum("ni,bnm,mj->bij", basis, h_tan, basis)
        rows.append(
            np.column_stack([f_vals, g_comp, h_comp[:, iu, ju]])
        )
        done += count
        chunk_idx += 1

    x = np.concatenate(rows, axis=0)
    assert x.shape == (samples, 1 + (n - 1) + iu.size)

    # Route coupling: the batched evaluation must agree with the scalar
    # sphere-of-radius-sqrt(n) code path on the first draws.
    assert first_batch is not None
    sigma = root_n * s_hat
    for i in range(first_batch.shape[0]):
        inst = HamiltonianInstance(
            n_dim=n, params=params, seed=0, couplings=first_batch[i],
            spike_direction=spike,
        )
        f_chk = eval_h(inst, sigma) / root_n
        g_chk = grad_sphere(inst, sigma) @ basis
        h_chk = root_n * (basis.T @ hess_sphere(inst, sigma) @ basis)
        scale = 1.0 + abs(f_chk)
        if abs(f_chk - x[i, 0]) > 1e-9 * scale:
            raise ArithmeticError("batched energy disagrees with scalar route")
        if np.max(np.abs(g_chk - x[i, 1 : n])) > 1e-9 * (1.0 + np.max(np.abs(g_chk))):
            raise ArithmeticError("batched gradient disagrees with scalar route")
        if np.max(np.abs(h_chk[iu, ju] - x[i, n:])) > 1e-9 * (
            1.0 + np.max(np.abs(h_chk))
        ):
            raise ArithmeticError("batched Hessian disagrees with scalar route")

    mean_t, cov_t, names = _covariance_targets(n, params, m)
    dim = mean_t.size

    est_mean = x.mean(axis=0)
    se_mean = x.std(axis=0, ddof=1) / math.sqrt(samples)
    centred = x - est_mean
    checks: list[MomentCheck] = []
    for a in range(dim):
        checks.append(
            MomentCheck(
                name=f"mean[{names[a]}]",
                estimate=float(est_mean[a]),
                target=float(mean_t[a]),
                stderr=float(se_mean[a]),
                z=float((est_mean[a] - mean_t[a]) / se_mean[a]),
            )
        )
    denom = samples - 1
    for a in range(dim):
        prod_a = centred[:, a]
        for b in range(a, dim):
            prods = prod_a * centred[:, b]
            est = float(prods.sum() / denom)
            se = float(prods.std(ddof=1) / math.sqrt(samples))
            checks.append(
                MomentCheck(
                    name=f"cov[{names[a]},{names[b]}]",
                    estimate=est,
                    target=float(cov_t[a, b]),
                    stderr=se,
                    z=float((est - cov_t[a, b]) / se),
                )
            )

    worst = max(checks, key=lambda c: abs(c.z))
    violations = tuple(c for c in checks if abs(c.z) > 3.0)
    return CovarianceReport(
        n_dim=n,
        params=params,
        overlap=m,
        samples=samples,
        n_moments=len(checks),
        worst=worst,
        violations=violations,
        passed=not violations,
    )


# ---------------------------------------------------------------------------
# Ground-state search
# ---------------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class GseEstimate:
    """Best minimum found by multi-start projected gradient descent."""

    energy_per_site: float
    overlap: float
    restarts: int
    best_seed_restart: int
    discarded: int = 0

    def __post_init__(self) -> None:
        if not -1.0 - 1e-12 <= self.overlap <= 1.0 + 1e-12:
            raise ValueError(f"overlap must lie in [-1, 1], got {self.overlap}")
        if self.restarts < 1:
            raise ValueError("need at least one restart")
        if not 0 <= self.best_seed_restart < self.restarts:
            raise ValueError("best restart index out of range")
        if self.discarded < 0 or self.discarded > self.restarts:
            raise ValueError("discarded restart count out of range")


def _retract(sigma: np.ndarray, n_dim: int) -> np.ndarray:
    return sigma * (math.sqrt(n_dim) / float(np.linalg.norm(sigma)))


def _fast_energy_funcs(instance: HamiltonianInstance):
    """Closures (value, value_and_tangent_grad) for the extensive energy.

    When the symmetrised coupling tensor is available the full contraction
    collapses to a chain of matrix-vector products (one BLAS call per tensor
    slot), which also yields the gradient for free one step before the end.
    Values agree with :func:`eval_h` / :func:`grad_sphere` to rounding; the
    optimiser's hot loop uses these, while reported results go through the
    public evaluators.
    """
    par = instance.params
    n, p, k, lam = instance.n_dim, instance.params.p, instance.params.k, instance.params.snr
    root_n = math.sqrt(n)
    spike = instance.spike_direction
    sym = instance._symmetrized()

    if sym is None:
        def value(sigma: np.ndarray) -> float:
            return root_n * _eval_f(instance, sigma / root_n)

        def value_grad(sigma: np.ndarray) -> tuple[float, np.ndarray]:
            s_hat = sigma / root_n
            g = _grad_eucl_f(instance, s_hat)
            return (
                root_n * _eval_f(instance, s_hat),
                g - (float(g @ sigma) / n) * sigma,
            )

        return value, value_grad

    def chain_vector(s_hat: np.ndarray) -> np.ndarray:
        cur = sym
        for _ in range(p - 1):
            cur = cur.reshape(-1, n) @ s_hat
        return cur

    def value(sigma: np.ndarray) -> float:
        s_hat = sigma / root_n
        m = float(s_hat @ spike)
        noise = float(chain_vector(s_hat) @ s_hat)
        return root_n * (-noise - (lam * root_n / k) * m**k)

    def value_grad(sigma: np.ndarray) -> tuple[float, np.ndarray]:
        s_hat = sigma / root_n
        m = float(s_hat @ spike)
        vec = chain_vector(s_hat)
        noise = float(vec @ s_hat)
        val = root_n * (-noise - (lam * root_n / k) * m**k)
        g = -p * vec - (lam * root_n * m ** (k - 1)) * spike
        return val, g - (float(g @ sigma) / n) * sigma

    return value, value_grad


def _descend(
    instance: HamiltonianInstance,
    sigma: np.ndarray,
    sign: float,
    step_rule: tuple[float, float],
    tol: float,
    max_iter: int,
) -> tuple[np.ndarray, float, bool]:
    """Projected gradient descent on ``sign * H`` with Armijo backtracking.

    Returns the final point, its energy ``sign * H``, and a convergence flag
    (tangent gradient norm below ``tol``).  Accepted steps decrease the
    objective monotonically.
    """
    backtrack, slope = step_rule
    n = instance.n_dim
    value, value_grad = _fast_energy_funcs(instance)
    energy = sign * value(sigma)
    step = 1.0
    for _ in range(max_iter):
        _, grad_full = value_grad(sigma)
        grad = sign * grad_full
        gnorm = float(np.linalg.norm(grad))
        if gnorm < tol:
            return sigma, energy, True
        step = min(2.0 * step, 100.0)
        accepted = False
        for _ in range(60):
            trial = _retract(sigma - step * grad, n)
            trial_energy = sign * value(trial)
            if trial_energy <= energy - slope * step * gnorm * gnorm:
                sigma, energy = trial, trial_energy
                accepted = True
                break
            step *= backtrack
        if not accepted:
            # Line search stalled at floating-point resolution; report the
            # current point with a final convergence determination.
            _, grad_full = value_grad(sigma)
            return sigma, energy, bool(np.linalg.norm(grad_full) < tol)
    _, grad_full = value_grad(sigma)
    return sigma, energy, bool(np.linalg.norm(grad_full) < tol)


def estimate_gse(
    instance: HamiltonianInstance,
    restarts: int = 200,
    step_rule: tuple[float, float] = (0.5, 1e-4),
    tol: float | None = None,
    max_iter: int = 6000,
) -> GseEstimate:
    """Ground-state energy estimate via multi-start projected gradient descent.

    Each restart starts from an independent uniform point on the sphere
    (restart ``r`` derives from stream ``r + 1`` of the instance seed, with
    stream 0 reserved for the couplings), runs backtracking projected
    gradient descent with metric-projection retraction, and terminates when
    the tangent gradient norm drops below ``tol`` (default ``1e-8 sqrt(n)``).
    Restarts that fail to converge within ``max_iter`` iterations are
    discarded and counted.  The estimate records the energy per site of the
    deepest converged minimum and its overlap with the spike.

    When the spike exponent ``k`` is even, the energy depends on the overlap
    only through its absolute value (the landscape law is invariant under a
    global sign flip), so the overlap is reported in the non-negative gauge.
    """
    if restarts < 1:
        raise ValueError("need at least one restart")
    n = instance.n_dim
    if tol is None:
        tol = 1e-8 * math.sqrt(n)
    best_energy = math.inf
    best_sigma: np.ndarray | None = None
    best_restart = -1
    discarded = 0
    for r in range(restarts):
        rng = substream(instance.seed, r + 1)
        start = _retract(rng.standard_normal(n), n)
        sigma, energy, converged = _descend(
            instance, start, 1.0, step_rule, tol, max_iter
        )
        if not converged:
            discarded += 1
            continue
        if energy < best_energy:
            best_energy, best_sigma, best_restart = energy, sigma, r
    if best_sigma is None:
        raise ArithmeticError(
            f"none of the {restarts} restarts converged within {max_iter} iterations"
        )
    best_energy = eval_h(instance, best_sigma)
    overlap = float(best_sigma @ instance.spike_direction) / math.sqrt(n)
    if instance.params.k % 2 == 0:
        overlap = abs(overlap)
    return GseEstimate(
        energy_per_site=best_energy / n,
        overlap=overlap,
        restarts=restarts,
        best_seed_restart=best_restart,
        discarded=discarded,
    )


# ---------------------------------------------------------------------------
# Dimension-2 critical-point census
# ---------------------------------------------------------------------------


class CriticalPoint(NamedTuple):
    """One critical point of the energy on the circle."""

    angle: float
    energy_density: float
    index: int
    overlap: float


@dataclasses.dataclass(frozen=True)
class CriticalCensus:
    """Complete critical-point inventory of a dimension-2 instance.

    ``all_points`` covers the full circle; ``points`` is the subset inside
    the requested overlap/energy windows.  Degenerate points (second angular
    derivative below the resolution threshold) are reported separately and
    never classified.
    """

    points: tuple[CriticalPoint, ...]
    all_points: tuple[CriticalPoint, ...]
    degenerate: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.degenerate:
            total = len(self.all_points)
            if total < 2 or total % 2 != 0:
                raise ValueError(
                    f"a smooth circle landscape needs an even number >= 2 of "
                    f"critical points, got {total}"
                )
            indices = [pt.index for pt in self.all_points]
            for here, after in zip(indices, indices[1:] + indices[:1]):
                if here == after:
                    raise ValueError("minima and maxima must alternate")

    @property
    def signed_count(self) -> int:
        """Minima minus maxima among the windowed points."""
        return sum(1 if pt.index == 0 else -1 for pt in self.points)


def _circle_energy_derivatives(
    instance: HamiltonianInstance, theta: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Energy and its first two angular derivatives on the radius-sqrt(2) circle.

    Vectorised over angles via batched contractions of the 2 x ... x 2
    coupling tensor; the spike direction is the second axis, so the overlap
    at angle ``theta`` is ``sin(theta)``.
    """
    par = instance.params
    p, k, lam = par.p, par.k, par.snr
    root2 = math.sqrt(2.0)
    c, s = np.cos(theta), np.sin(theta)
    pos = np.stack([c, s], axis=-1)
    vel = np.stack([-s, c], axis=-1)

    def contract(slots: Sequence[np.ndarray]) -> np.ndarray:
        ops: list = [instance.couplings, list(range(1, p + 1))]
        for t in range(p):
            ops.extend([slots[t], [0, t + 1]])
        ops.append([0])
        return np.einsum(*ops)

    val = contract([pos] * p)
    d1 = np.zeros_like(val)
    for free in range(p):
        d1 += contract([vel if t == free else pos for t in range(p)])
    d2 = np.zeros_like(val)
    for a in range(p):
        for b in range(p):
            if a == b:
                continue
            d2 += contract(
                [vel if t in (a, b) else pos for t in range(p)]
            )
    d2 -= p * val  # second derivative of each slot is -pos

    spike = (lam * root2 / k) * s**k
    spike_d1 = lam * root2 * s ** (k - 1) * c
    if k == 1:
        spike_d2 = -lam * root2 * s
    else:
        spike_d2 = lam * root2 * (
            (k - 1) * s ** (k - 2) * c * c - s**k
        )
    h = root2 * (-val - spike)
    h1 = root2 * (-d1 - spike_d1)
    h2 = root2 * (-d2 - spike_d2)
    return h, h1, h2


def census_n2(
    instance: HamiltonianInstance,
    overlap_window: tuple[float, float] | None = None,
    energy_window: tuple[float, float] | None = None,
    grid_points: int = 100_000,
) -> CriticalCensus:
    """Exhaustive critical-point census on the circle (dimension 2 only).

    Scans a dense uniform angular grid for sign changes of the angular
    derivative, polishes each bracket to angular resolution 1e-12 (bisection
    followed by Newton), classifies by the sign of the second derivative, and
    filters the reported points by the optional overlap (``sin`` of the
    angle) and energy-per-site windows.  Points with second derivative below
    1e-8 in magnitude are flagged as degenerate rather than classified.
    """
    if instance.n_dim != 2:
        raise ValueError("the census requires a dimension-2 instance")
    if grid_points < 4 * (instance.params.p + instance.params.k):
        raise ValueError("grid too coarse to separate all critical points")
    theta = np.linspace(0.0, 2.0 * math.pi, grid_points, endpoint=False)
    _, h1, _ = _circle_energy_derivatives(instance, theta)
    sign = np.sign(h1)
    flips = np.nonzero(sign != np.roll(sign, -1))[0]

    roots: list[float] = []
    two_pi = 2.0 * math.pi
    spacing = two_pi / grid_points
    for j in flips:
        lo = theta[j]
        hi = lo + spacing
        f_lo = float(h1[j])
        for _ in range(30):
            mid = 0.5 * (lo + hi)
            f_mid = float(_circle_energy_derivatives(instance, np.array([mid]))[1][0])
            if (f_mid >= 0.0) == (f_lo >= 0.0):
                lo, f_lo = mid, f_mid
            else:
                hi = mid
        root = 0.5 * (lo + hi)
        for _ in range(8):
            _, d1, d2 = _circle_energy_derivatives(instance, np.array([root]))
            if d2[0] == 0.0:
                break
            delta = float(d1[0] / d2[0])
            root -= delta
            if abs(delta) < 1e-13:
                break
        roots.append(root % two_pi)

    roots.sort()
    deduped: list[float] = []
    for r in roots:
        if not deduped or (r - deduped[-1]) > 1e-9:
            deduped.append(r)
    if len(deduped) >= 2 and (deduped[0] + two_pi - deduped[-1]) <= 1e-9:
        deduped.pop()

    angles = np.array(deduped)
    h, h1, h2 = _circle_energy_derivatives(instance, angles)
    scale = 1.0 + float(np.max(np.abs(h))) if angles.size else 1.0
    if angles.size and float(np.max(np.abs(h1))) > 1e-10 * scale:
        raise ArithmeticError("critical-point polish failed to reach tolerance")

    all_points: list[CriticalPoint] = []
    degenerate: list[float] = []
    for i in range(angles.size):
        if abs(float(h2[i])) < 1e-8:
            degenerate.append(float(angles[i]))
            continue
        all_points.append(
            CriticalPoint(
                angle=float(angles[i]),
                energy_density=float(h[i]) / 2.0,
                index=0 if h2[i] > 0.0 else 1,
                overlap=float(math.sin(angles[i])),
            )
        )

    selected = [
        pt
        for pt in all_points
        if (
            overlap_window is None
            or overlap_window[0] <= pt.overlap <= overlap_window[1]
        )
        and (
            energy_window is None
            or energy_window[0] <= pt.energy_density <= energy_window[1]
        )
    ]
    return CriticalCensus(
        points=tuple(selected),
        all_points=tuple(all_points),
        degenerate=tuple(degenerate),
    )


@dataclasses.dataclass(frozen=True)
class CensusEnsemble:
    """Ensemble mean of the windowed signed critical-point count."""

    mean: float
    stderr: float
    instances: int
    flagged: int


def census_euler_batch(
    params: ModelParams,
    n_instances: int,
    overlap_window: tuple[float, float],
    energy_window: tuple[float, float],
    seed: int,
    cross_check: int = 50,
) -> CensusEnsemble:
    """Mean windowed (minima - maxima) count over many dimension-2 instances.

    High-throughput route: the angular derivative of each instance is a
    trigonometric polynomial of degree ``max(p, k)``, recovered exactly from
    uniform samples by FFT; its roots come from the companion matrix of the
    associated complex polynomial (batched eigenvalues), then a vectorised
    Newton polish on the circle.  The first ``cross_check`` instances are
    re-counted with :func:`census_n2` on identical couplings and must match
    exactly — this pins the fast route to the scan-and-polish route.

    Instances with a near-degenerate critical point (second derivative below
    1e-8) are flagged and excluded from the average.
    """
    if n_instances < 2:
        raise ValueError("need at least two instances")
    seed = _check_seed(seed)
    p, k, lam = params.p, params.k, params.snr
    root2 = math.sqrt(2.0)
    degree = max(p, k)
    n_ang = 1
    while n_ang < 2 * degree + 2:
        n_ang *= 2
    theta_grid = 2.0 * math.pi * np.arange(n_ang) / n_ang
    cs = np.cos(theta_grid)
    sn = np.sin(theta_grid)
    pos = np.stack([cs, sn], axis=-1)  # (A, 2)
    vel = np.stack([-sn, cs], axis=-1)

    chi_values: list[np.ndarray] = []
    flagged = 0
    checked = 0
    done = 0
    chunk_idx = 0
    while done < n_instances:
        count = min(_CENSUS_CHUNK, n_instances - done)
        rng = substream(seed, chunk_idx)
        j_batch = rng.standard_normal(size=(count,) + (2,) * p)

        def grid_contract(slots: list[np.ndarray]) -> np.ndarray:
            ops: list = [j_batch, [0] + list(range(2, p + 2))]
            for t in range(p):
                ops.extend([slots[t], [1, t + 2]])
            ops.append([0, 1])
            return np.einsum(*ops)

        d1 = np.zeros((count, n_ang))
        for free in range(p):
            d1 += grid_contract([vel if t == free else pos for t in range(p)])
        h1_grid = root2 * (-d1 - lam * root2 * sn ** (k - 1) * cs)

        # Exact trigonometric interpolation of the angular derivative.
        coef = np.fft.rfft(h1_grid, axis=1) / n_ang  # (count, n_ang/2 + 1)
        # h1(theta) = coef[0].real + 2 sum_{d>=1} Re(coef[d] exp(i d theta))
        gamma = coef[:, : degree + 1].copy()
        # Polynomial in z = exp(i theta): sum_{d=-D..D} gamma_d z^d with
        # gamma_{-d} = conj(gamma_d); multiply by z^D -> degree-2D polynomial.
        poly = np.zeros((count, 2 * degree + 1), dtype=complex)
        poly[:, : degree] = np.conj(gamma[:, 1:])[:, ::-1]
        poly[:, degree] = gamma[:, 0]
        poly[:, degree + 1 :] = gamma[:, 1:]

        lead = poly[:, -1]
        ok_lead = np.abs(lead) > 1e-12 * np.max(np.abs(poly), axis=1)
        comp = np.zeros((count, 2 * degree, 2 * degree), dtype=complex)
        comp[:, 1:, :-1] = np.eye(2 * degree - 1)
        safe_lead = np.where(ok_lead, lead, 1.0)
        comp[:, :, -1] = -poly[:, :-1] / safe_lead[:, None]
        eig = np.linalg.eigvals(comp)  # (count, 2D)
        for b in np.nonzero(~ok_lead)[0]:  # pragma: no cover - measure zero
            trimmed = np.trim_zeros(poly[b], "b")
            r = np.roots(trimmed[::-1])
            eig[b, : r.size] = r
            eig[b, r.size :] = 10.0

        on_circle = np.abs(np.abs(eig) - 1.0) < 1e-6
        ang = np.angle(eig)  # (count, 2D)

        # Vectorised Newton polish using the exact harmonic series.
        d_idx = np.arange(1, degree + 1)
        for _ in range(30):
            phase = np.exp(1j * ang[..., None] * d_idx)
            f1 = coef[:, 0].real[:, None] + 2.0 * np.sum(
                (coef[:, None, 1 : degree + 1] * phase).real, axis=-1
            )
            f2 = 2.0 * np.sum(
                (coef[:, None, 1 : degree + 1] * 1j * d_idx * phase).real, axis=-1
            )
            safe = np.where(np.abs(f2) > 1e-14, f2, 1.0)
            delta = np.where(on_circle & (np.abs(f2) > 1e-14), f1 / safe, 0.0)
            ang -= delta
            if np.max(np.abs(delta), initial=0.0) < 1e-13:
                break
        ang = np.mod(ang, 2.0 * math.pi)

        # Classify with the second derivative; mark degenerate instances.
        phase = np.exp(1j * ang[..., None] * d_idx)
        f2 = 2.0 * np.sum(
            (coef[:, None, 1 : degree + 1] * 1j * d_idx * phase).real, axis=-1
        )
        degenerate_inst = np.any(on_circle & (np.abs(f2) < 1e-8), axis=1)

        # Remove duplicate roots (conjugate-pair artefacts of the eigenvalue
        # route land on the same angle after polishing).
        order = np.argsort(ang, axis=1)
        ang_sorted = np.take_along_axis(ang, order, axis=1)
        mask_sorted = np.take_along_axis(on_circle, order, axis=1)
        prev = np.roll(ang_sorted, 1, axis=1)
        prev_mask = np.roll(mask_sorted, 1, axis=1)
        gap = np.mod(ang_sorted - prev, 2.0 * math.pi)
        dup = mask_sorted & prev_mask & (gap < 1e-7)
        keep = mask_sorted & ~dup
        ang_kept = ang_sorted
        f2_sorted = np.take_along_axis(f2, order, axis=1)

        # Energy and overlap at the kept critical points.
        pos_r = np.stack([np.cos(ang_kept), np.sin(ang_kept)], axis=-1)

        ops: list = [j_batch, [0] + list(range(2, p + 2))]
        for t in range(p):
            ops.extend([pos_r, [0, 1, t + 2]])
        ops.append([0, 1])
        val = np.einsum(*ops)
        h_val = root2 * (
            -val - (lam * root2 / k) * np.sin(ang_kept) ** k
        )
        energy_density = h_val / 2.0
        overlap = np.sin(ang_kept)

        in_window = (
            keep
            & (overlap >= overlap_window[0])
            & (overlap <= overlap_window[1])
            & (energy_density >= energy_window[0])
            & (energy_density <= energy_window[1])
        )
        signed = np.where(f2_sorted > 0.0, 1, -1)
        chi = np.sum(np.where(in_window, signed, 0), axis=1)

        # Smooth-landscape invariant: an even number of circle critical points.
        total_roots = keep.sum(axis=1)
        bad_parity = (total_roots % 2 != 0) | (total_roots < 2)
        drop = degenerate_inst | bad_parity
        flagged += int(drop.sum())
        chi_values.append(chi[~drop])

        if checked < cross_check:
            take = min(cross_check - checked, count)
            spike = np.array([0.0, 1.0])
            for b in range(take):
                if drop[b]:
                    continue
                inst = HamiltonianInstance(
                    n_dim=2, params=params, seed=0,
                    couplings=j_batch[b], spike_direction=spike,
                )
                census = census_n2(inst, overlap_window, energy_window)
                if census.signed_count != int(chi[b]):
                    raise ArithmeticError(
                        "fast ensemble census disagrees with the dense-scan "
                        f"census on instance {done + b}: "
                        f"{int(chi[b])} vs {census.signed_count}"
                    )
            checked += take

        done += count
        chunk_idx += 1

    chi_all = np.concatenate(chi_values).astype(float)
    if chi_all.size < 2:
        raise ArithmeticError("too few usable instances for an ensemble mean")
    if flagged > 0.001 * n_instances:
        raise ArithmeticError(
            f"{flagged} of {n_instances} instances were flagged as degenerate; "
            "this exceeds the expected measure-zero rate"
        )
    return CensusEnsemble(
        mean=float(chi_all.mean()),
        stderr=float(chi_all.std(ddof=1) / math.sqrt(chi_all.size)),
        instances=int(chi_all.size),
        flagged=flagged,
    )


# ---------------------------------------------------------------------------
# Hessian index profile
# ---------------------------------------------------------------------------


@dataclasses.dataclass
class IndexProfile:
    """Histogram of the Hessian index over located critical points."""

    histogram: dict[int, int]
    points: tuple[tuple[float, int, float], ...]  # (energy_density, index, overlap)

    @property
    def total(self) -> int:
        return sum(self.histogram.values())

    def fraction(self, index: int) -> float:
        total = self.total
        return self.histogram.get(index, 0) / total if total else math.nan


def _tangent_basis(sigma: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the tangent space at a sphere point (n x (n-1))."""
    n = sigma.size
    q, _ = np.linalg.qr(np.column_stack([sigma, np.eye(n)]))
    return q[:, 1:n]


def hessian_index(
    instance: HamiltonianInstance, sigma: np.ndarray, cutoff: float = 1e-8
) -> int:
    """Number of negative tangent Hessian eigenvalues at a critical point.

    Eigenvalues below ``-cutoff * scale`` count as negative, where ``scale``
    is the spectral radius of the tangent Hessian block.
    """
    basis = _tangent_basis(_check_on_sphere(instance, sigma))
    block = basis.T @ hess_sphere(instance, sigma) @ basis
    eigs = np.linalg.eigvalsh(block)
    scale = float(np.max(np.abs(eigs))) if eigs.size else 1.0
    return int(np.sum(eigs < -cutoff * max(scale, 1e-300)))


def index_profile(
    instance_batch: Sequence[HamiltonianInstance],
    energy_window: tuple[float, float],
    restarts: int = 40,
    tol: float | None = None,
    max_iter: int = 6000,
) -> IndexProfile:
    """Hessian-index histogram of critical points inside an energy window.

    For each instance (dimension at most 12, so eigendecompositions stay
    cheap) multi-start projected gradient descent and ascent locate critical
    points; duplicates are merged by distance, the windowed ones get their
    tangent-Hessian index, and the histogram aggregates the batch.
    """
    lo, hi = energy_window
    if not lo < hi:
        raise ValueError("energy window must be a nonempty interval")
    histogram: dict[int, int] = {}
    records: list[tuple[float, int, float]] = []
    for instance in instance_batch:
        n = instance.n_dim
        if n > 12:
            raise ValueError(
                f"index profiling is limited to dimension <= 12, got {n}"
            )
        eff_tol = 1e-8 * math.sqrt(n) if tol is None else tol
        found: list[np.ndarray] = []
        for r in range(restarts):
            for sign, stream in ((1.0, 1_000_003 + r), (-1.0, 2_000_003 + r)):
                rng = substream(instance.seed, stream)
                start = _retract(rng.standard_normal(n), n)
                sigma, _, converged = _descend(
                    instance, start, sign, (0.5, 1e-4), eff_tol, max_iter
                )
                if converged:
                    found.append(sigma)
        unique: list[np.ndarray] = []
        for sigma in found:
            if all(
                float(np.linalg.norm(sigma - other)) > 1e-5 * math.sqrt(n)
                for other in unique
            ):
                unique.append(sigma)
        for sigma in unique:
            density = eval_h(instance, sigma) / n
            if not lo <= density <= hi:
                continue
            idx = hessian_index(instance, sigma)
            overlap = float(sigma @ instance.spike_direction) / math.sqrt(n)
            histogram[idx] = histogram.get(idx, 0) + 1
            records.append((density, idx, overlap))
    return IndexProfile(histogram=histogram, points=tuple(records))


# ---------------------------------------------------------------------------
# Serialisation
# ---------------------------------------------------------------------------


def serialize_instance(instance: HamiltonianInstance) -> bytes:
    """Portable binary form: fixed little-endian header plus raw couplings.

    Header fields: magic, format version, dimension, tensor order, spike
    exponent (all unsigned 64-bit), signal strength (binary64), seed.  The
    payload stores the couplings as binary64 in row-major order.
    """
    par = instance.params
    header = _HEADER.pack(
        _MAGIC,
        _FORMAT_VERSION,
        instance.n_dim,
        par.p,
        par.k,
        par.snr,
        instance.seed,
    )
    payload = np.ascontiguousarray(instance.couplings, dtype="<f8").tobytes()
    return header + payload


def deserialize_instance(blob: bytes) -> HamiltonianInstance:
    """Inverse of :func:`serialize_instance`, with full validation."""
    if len(blob) < _HEADER.size:
        raise ValueError("blob too short for the instance header")
    magic, version, n_dim, p, k, snr, seed = _HEADER.unpack_from(blob)
    if magic != _MAGIC:
        raise ValueError(f"bad magic {magic!r}; not a serialized instance")
    if version != _FORMAT_VERSION:
        raise ValueError(f"unsupported format version {version}")
    params = ModelParams(p=int(p), k=int(k), snr=float(snr))
    expected = _HEADER.size + 8 * int(n_dim) ** int(p)
    if len(blob) != expected:
        raise ValueError(
            f"payload length mismatch: blob has {len(blob)} bytes, "
            f"expected {expected}"
        )
    couplings = (
        np.frombuffer(blob, dtype="<f8", offset=_HEADER.size)
        .reshape((int(n_dim),) * int(p))
        .astype(float)
    )
    spike = np.zeros(int(n_dim))
    spike[-1] = 1.0
    return HamiltonianInstance(
        n_dim=int(n_dim),
        params=params,
        seed=int(seed),
        couplings=couplings,
        spike_direction=spike,
    )
