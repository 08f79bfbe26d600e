"""Property-based tests: structural invariants that must hold across the
whole parameter domain, not just at hand-picked fixtures.

The ``numeric`` hypothesis profile (tests/conftest.py) disables deadlines
and caps example counts so the numerically heavy properties stay fast.
"""

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from spikeland import kac_rice as kr
from spikeland import landscape_sim as ls
from spikeland import rmt_mc as rmt
from spikeland import scalar_core as sc
from spikeland import thresholds_gse as th
from spikeland.model import ModelParams
from spikeland.rng import substream

# ---------------------------------------------------------------------------
# strategies
# ---------------------------------------------------------------------------

orders = st.integers(min_value=3, max_value=5)
spike_powers = st.integers(min_value=1, max_value=4)
strengths = st.floats(min_value=0.0, max_value=12.0,
                      allow_nan=False, allow_infinity=False)
latitudes = st.floats(min_value=0.05, max_value=0.95,
                      allow_nan=False, allow_infinity=False)
energies = st.floats(min_value=-8.0, max_value=8.0,
                     allow_nan=False, allow_infinity=False)


@st.composite
def model_params(draw, min_snr=0.0, max_snr=12.0):
    return ModelParams(p=draw(orders), k=draw(spike_powers),
                       snr=draw(st.floats(min_value=min_snr,
                                          max_value=max_snr,
                                          allow_nan=False,
                                          allow_infinity=False)))


# ---------------------------------------------------------------------------
# change of variables
# ---------------------------------------------------------------------------

@given(x=energies, m=latitudes, params=model_params())
def test_energy_shift_round_trip(x, m, params):
    y = sc.y_of(x, m, params)
    back = sc.x_of(y, m, params)
    assert math.isclose(back, x, rel_tol=1e-11, abs_tol=1e-11)


@given(m=latitudes, params=model_params())
def test_shift_is_affine_with_unit_slope(m, params):
    # y(x) - y(0) must equal x * p / sqrt(2p(p-1)) for every latitude
    slope = params.p / math.sqrt(2.0 * params.p * (params.p - 1))
    y0 = sc.y_of(0.0, m, params)
    y1 = sc.y_of(1.0, m, params)
    assert math.isclose(y1 - y0, slope, rel_tol=1e-12)


# ---------------------------------------------------------------------------
# complexity surface
# ---------------------------------------------------------------------------

@given(m=latitudes, y=st.floats(min_value=-1.41, max_value=3.0),
       params=model_params())
def test_surface_is_minus_infinity_above_bulk_edge(m, y, params):
    val = sc.s_tilde(m, y, params)
    assert float(val) == -math.inf


@given(m=st.floats(min_value=0.1, max_value=0.9),
       y=st.floats(min_value=-4.5, max_value=-1.7),
       params=model_params(max_snr=8.0))
def test_first_partials_match_central_differences(m, y, params):
    h = 1e-6
    part = sc.s_tilde_partials(m, y, params)
    fd_m = (float(sc.s_tilde(m + h, y, params))
            - float(sc.s_tilde(m - h, y, params))) / (2 * h)
    fd_y = (float(sc.s_tilde(m, y + h, params))
            - float(sc.s_tilde(m, y - h, params))) / (2 * h)
    assert part.dm == pytest.approx(fd_m, abs=5e-5)
    assert part.dy == pytest.approx(fd_y, abs=5e-5)


@given(m=latitudes, y=st.floats(min_value=-5.0, max_value=-1.5),
       params=model_params(min_snr=0.0, max_snr=0.0))
def test_rank_one_correction_is_trivial_without_signal(m, y, params):
    assert sc.j_factor(m, y, params) == pytest.approx(1.0, abs=1e-14)


# ---------------------------------------------------------------------------
# thresholds and deep minima
# ---------------------------------------------------------------------------

@given(p=orders, k=spike_powers)
def test_threshold_ordering(p, k):
    l1 = th.lambda1(p, k)
    l2 = th.lambda2(p, k)
    assert 0.0 <= l1 <= l2 + 1e-12


@given(params=model_params(min_snr=1e-3))
def test_onset_latitude_lies_in_unit_interval(params):
    m = th.m_lambda(params)
    assert 0.0 < m <= 1.0


@given(p=orders, k=spike_powers,
       off=st.floats(min_value=1e-4, max_value=50.0))
def test_deepest_latitude_exceeds_onset_past_second_threshold(p, k, off):
    params = ModelParams(p=p, k=k, snr=th.lambda2(p, k) + off)
    ms = th.m_star(params)
    assert ms is not None
    assert th.m_lambda(params) < ms < 1.0
    pred = th.gse_predict(params)
    assert math.isclose(pred.x_star, pred.gse_alt_form,
                        rel_tol=1e-9, abs_tol=1e-9)


@given(p=orders, k=spike_powers,
       frac=st.floats(min_value=0.05, max_value=0.95))
def test_no_deepest_latitude_below_first_threshold(p, k, frac):
    l1 = th.lambda1(p, k)
    assume(l1 > 0.0)
    params = ModelParams(p=p, k=k, snr=frac * l1)
    assert th.m_star(params) is None


# ---------------------------------------------------------------------------
# Hermite machinery
# ---------------------------------------------------------------------------

@given(n=st.integers(min_value=1, max_value=80),
       x=st.floats(min_value=-8.0, max_value=8.0))
def test_hermite_function_three_term_recurrence(n, x):
    lo = sc.hermite_phi(n - 1, x)
    mid = sc.hermite_phi(n, x)
    hi = sc.hermite_phi(n + 1, x)
    rhs = (math.sqrt(2.0 / (n + 1)) * x * mid
           - math.sqrt(n / (n + 1.0)) * lo)
    assert math.isclose(hi, rhs, rel_tol=1e-9, abs_tol=1e-12)


@given(n=st.integers(min_value=0, max_value=40))
def test_hermite_function_parity(n):
    x = 1.37
    assert sc.hermite_phi(n, -x) == pytest.approx(
        (-1.0) ** n * sc.hermite_phi(n, x), rel=1e-12)


# ---------------------------------------------------------------------------
# determinant identities
# ---------------------------------------------------------------------------

def _det_value(n, theta_val, y):
    sign, log = kr.expected_det_rank1(n, theta_val, y)
    return sign * math.exp(log)


@given(n=st.integers(min_value=1, max_value=8),
       t1=st.floats(min_value=-3.0, max_value=3.0),
       t2=st.floats(min_value=-3.0, max_value=3.0),
       y=st.floats(min_value=-3.0, max_value=3.0))
def test_shifted_determinant_expectation_is_affine_in_shift(n, t1, t2, y):
    mid = _det_value(n, 0.5 * (t1 + t2), y)
    avg = 0.5 * (_det_value(n, t1, y) + _det_value(n, t2, y))
    assert math.isclose(mid, avg, rel_tol=1e-9, abs_tol=1e-9)


@given(n=st.integers(min_value=2, max_value=12),
       f=st.floats(min_value=-2.0, max_value=2.0),
       s=st.floats(min_value=-2.0, max_value=2.0))
def test_characteristic_integral_matches_hermite_route(n, f, s):
    via_integral = rmt.char_integral_det(n, f, s)
    sign, log = kr.expected_det_rank1(n, f, -s)
    assert math.isclose(via_integral, sign * math.exp(log),
                        rel_tol=1e-8, abs_tol=1e-10)


# ---------------------------------------------------------------------------
# random landscapes
# ---------------------------------------------------------------------------

@settings(max_examples=15)
@given(n_dim=st.integers(min_value=3, max_value=8),
       p=orders, k=spike_powers,
       seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_serialization_round_trip(n_dim, p, k, seed):
    inst = ls.sample_instance(n_dim, ModelParams(p=p, k=k, snr=1.5), seed)
    clone = ls.deserialize_instance(ls.serialize_instance(inst))
    assert clone.n_dim == inst.n_dim and clone.params == inst.params
    np.testing.assert_array_equal(clone.couplings, inst.couplings)
    np.testing.assert_array_equal(clone.spike_direction, inst.spike_direction)


@settings(max_examples=15)
@given(n_dim=st.integers(min_value=3, max_value=8), p=orders,
       seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_pure_noise_energy_parity(n_dim, p, seed):
    inst = ls.sample_instance(n_dim, ModelParams(p=p, k=2, snr=0.0), seed)
    rng = substream(seed, 99)
    v = rng.standard_normal(n_dim)
    v /= np.linalg.norm(v)
    assert ls.eval_f(inst, -v) == pytest.approx(
        (-1.0) ** p * ls.eval_f(inst, v), rel=1e-10, abs=1e-12)


@settings(max_examples=10)
@given(n_dim=st.integers(min_value=4, max_value=8),
       seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_gradient_and_hessian_respect_tangency(n_dim, seed):
    inst = ls.sample_instance(n_dim, ModelParams(p=3, k=2, snr=2.0), seed)
    rng = substream(seed, 7)
    sigma = rng.standard_normal(n_dim)
    sigma *= math.sqrt(n_dim) / np.linalg.norm(sigma)
    g = ls.grad_sphere(inst, sigma)
    h = ls.hess_sphere(inst, sigma)
    assert abs(g @ sigma) < 1e-9 * max(1.0, np.linalg.norm(g))
    assert np.linalg.norm(h @ sigma) < 1e-9 * max(1.0, np.linalg.norm(h))
    np.testing.assert_allclose(h, h.T, atol=1e-12)


# ---------------------------------------------------------------------------
# reproducible randomness
# ---------------------------------------------------------------------------

@given(seed=st.integers(min_value=0, max_value=2**63 - 1),
       stream=st.integers(min_value=0, max_value=1000))
def test_substreams_replay_and_separate(seed, stream):
    a = substream(seed, stream).standard_normal(4)
    b = substream(seed, stream).standard_normal(4)
    c = substream(seed, stream + 1).standard_normal(4)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)
