"""Expected-count machinery on latitude-energy windows: the determinant
closed forms, the exact finite-size count, the two-term asymptotics, the
sharp leading term, and the strong-signal limit constant.

The exact count is validated against topology: integrated over the whole
sphere the signed count must equal the Euler characteristic, 0 for the
circle and 2 for the 2-sphere, independent of the landscape.
"""

import math

import pytest

from spikeland import kac_rice as kr
from spikeland import scalar_core as sc
from spikeland import thresholds_gse as tg
from spikeland.model import ModelParams

PAR = ModelParams(3, 2, 6.0)

DEEP_WINDOW = kr.count_window((0.5, 0.995), (-6.0, -2.75), PAR)
RATE0_WINDOW = kr.count_window((0.8, 0.999), (-3.55, -2.95), PAR)


# ---------------------------------------------------------------------------
# windows
# ---------------------------------------------------------------------------

def test_window_validation_rejects_shallow_energy():
    with pytest.raises(ValueError, match="sup E"):
        kr.count_window((0.5, 0.995), (-2.0, -1.0), PAR)


def test_window_deep_energy_bound_value():
    bound = DEEP_WINDOW.deep_energy_bound(PAR)
    expect = -2.0 * math.sqrt(2.0 / 3.0) - abs(1.0 / 3.0 - 1.0 / 2.0) * 6.0
    assert bound == pytest.approx(expect, rel=1e-12)
    assert DEEP_WINDOW.x_hi < bound


def test_window_contains():
    assert DEEP_WINDOW.contains(0.957, -3.25)
    assert not DEEP_WINDOW.contains(0.3, -3.25)
    assert not DEEP_WINDOW.contains(0.957, -2.0)


# ---------------------------------------------------------------------------
# rank-one determinant closed forms
# ---------------------------------------------------------------------------

def _rank1_value(n, theta, y):
    sign, log_mag = kr.expected_det_rank1(n, theta, y)
    return sign * math.exp(log_mag)


def test_rank1_determinant_low_order_closed_forms():
    for theta in (0.0, 0.4, 1.3, 2.0):
        for y in (-2.3, -0.7, 0.0, 0.9, 2.2):
            assert _rank1_value(1, theta, y) == pytest.approx(
                -theta - y, abs=1e-12)
            assert _rank1_value(2, theta, y) == pytest.approx(
                y * y + theta * y - 0.25, abs=1e-12)
            assert _rank1_value(3, theta, y) == pytest.approx(
                (-theta - y) * (y * y - 1.0 / 6.0) + y / 3.0, abs=1e-12)


def test_rank1_determinant_is_affine_in_shift():
    # The rank-one expansion makes the expectation affine in theta.
    for n in (2, 4, 7):
        v0 = _rank1_value(n, 0.0, 0.8)
        v1 = _rank1_value(n, 1.0, 0.8)
        v2 = _rank1_value(n, 2.0, 0.8)
        assert v2 - v1 == pytest.approx(v1 - v0, rel=1e-9)


def test_rank1_determinant_rejects_bad_order():
    with pytest.raises(ValueError):
        kr.expected_det_rank1(0, 0.0, 1.0)


def test_conditional_rank_one_strength():
    # k = 1 spikes shift the gradient, not the Hessian: no rank-one term.
    assert kr.theta(0.7, ModelParams(3, 1, 5.0)) == 0.0
    val = kr.theta(0.9, PAR)
    expect = 6.0 * (2 - 1) * 0.9 ** 0 * (1 - 0.81) / math.sqrt(2 * 3 * 2)
    assert val == pytest.approx(expect, rel=1e-12)
    assert val == pytest.approx(0.3290896534380866, rel=1e-13)


def test_exact_determinant_factor_matches_closed_forms():
    # N = 2 reduces to a 1x1 expectation, N = 3 to the quadratic form;
    # both are exact algebra after the sqrt(N/(N-1)) rescaling.
    p = PAR.p
    for x, m in ((-3.3, 0.9), (-2.9, 0.6)):
        theta = kr.theta(m, PAR)
        y = sc.y_of(x, m, PAR)

        sign, log_mag = kr.g_n_det(x, m, 2, PAR)
        pref = math.sqrt(2.0 * p * (p - 1.0))
        exact = pref * math.sqrt(2.0) * (-theta - y)
        assert sign * math.exp(log_mag) == pytest.approx(exact, rel=1e-12)

        sign, log_mag = kr.g_n_det(x, m, 3, PAR)
        r = math.sqrt(3.0 / 2.0)
        yt, tt = r * y, r * theta
        exact = (4.0 * p * (p - 1.0)) * (yt * yt + tt * yt - 0.25)
        assert sign * math.exp(log_mag) == pytest.approx(exact, rel=1e-12)


# ---------------------------------------------------------------------------
# exact expected Euler characteristic
# ---------------------------------------------------------------------------

def test_full_sphere_signed_count_is_euler_characteristic():
    # Topology fixes the answer independently of the landscape: 0 on the
    # circle, 2 on the 2-sphere.
    full = kr.CountWindow(-1.0 + 1e-9, 1.0 - 1e-9, -40.0, 40.0)
    chi_circle = kr.expected_euler_char(full, 2, PAR, abs_tol=1e-6)
    assert chi_circle == pytest.approx(0.0, abs=2e-3)
    chi_sphere = kr.expected_euler_char(full, 3, PAR, abs_tol=1e-6)
    assert chi_sphere == pytest.approx(2.0, abs=2e-3)


def test_full_sphere_euler_characteristic_other_params():
    full = kr.CountWindow(-1.0 + 1e-9, 1.0 - 1e-9, -40.0, 40.0)
    for par in (ModelParams(3, 1, 2.0), ModelParams(4, 3, 5.0)):
        chi = kr.expected_euler_char(full, 3, par, abs_tol=1e-6)
        assert chi == pytest.approx(2.0, abs=5e-3)


def test_deep_window_count_regression():
    # Strong signal, deep window around the predicted ground state: in the
    # trivialized regime the expected count is essentially one minimum.
    val = kr.expected_euler_char(DEEP_WINDOW, 2, PAR)
    assert val == pytest.approx(0.4224280656897528, rel=1e-6)
    val100 = kr.expected_euler_char(DEEP_WINDOW, 100, PAR)
    assert val100 == pytest.approx(1.0, abs=2e-2)


def test_euler_char_rejects_tiny_size():
    with pytest.raises(ValueError):
        kr.expected_euler_char(DEEP_WINDOW, 1, PAR)


# ---------------------------------------------------------------------------
# asymptotic terms, saddle, sharp form, constant
# ---------------------------------------------------------------------------

def test_term_integrals_converge_to_exact_count():
    t1_100, t2_100 = kr.term_integrals(RATE0_WINDOW, 100, PAR)
    exact = kr.expected_euler_char(RATE0_WINDOW, 100, PAR)
    assert t1_100 + t2_100 == pytest.approx(exact, rel=0.05)
    # second term is a strict correction: smaller than the first
    assert abs(t2_100) < abs(t1_100)


def test_term_integrals_vanishing_second_term_for_gradient_spike():
    # k = 1: no rank-one Hessian shift, so the correction term is zero.
    par = ModelParams(3, 1, 4.0)
    pred = tg.gse_predict(par)
    win = kr.count_window((pred.m_star - 0.1, min(pred.m_star + 0.1, 0.999)),
                          (pred.x_star - 0.3, pred.x_star + 0.05), par)
    t1, t2 = kr.term_integrals(win, 50, par)
    assert t2 == 0.0
    assert t1 > 0.0


def test_saddle_sits_at_prediction_inside_rate_zero_window():
    m_o, y_o, rate = kr.saddle(RATE0_WINDOW, PAR)
    pred = tg.gse_predict(PAR)
    assert m_o == pytest.approx(pred.m_star, abs=1e-6)
    assert y_o == pytest.approx(pred.y_star, abs=1e-6)
    assert rate == pytest.approx(0.0, abs=1e-10)


def test_saddle_on_displaced_window_has_negative_rate():
    win = kr.count_window((0.1, 0.4), (-6.0, -4.5), PAR)
    _, _, rate = kr.saddle(win, PAR)
    assert rate < -1e-3


def test_sharp_asymptotic_matches_exact_count():
    for n_dim in (100, 200):
        sharp = kr.sharp_asymptotic(RATE0_WINDOW, n_dim, PAR)
        exact = kr.expected_euler_char(RATE0_WINDOW, n_dim, PAR)
        assert sharp == pytest.approx(exact, rel=0.05)


def test_sharp_asymptotic_rejects_boundary_saddle():
    win = kr.count_window((0.1, 0.4), (-6.0, -4.5), PAR)
    with pytest.raises(ValueError):
        kr.sharp_asymptotic(win, 100, PAR)


def test_limit_constant_is_one_beyond_second_threshold():
    for p, k in ((3, 1), (3, 2), (3, 3), (4, 3)):
        lam2 = tg.lambda2(p, k)
        for off in (0.5, 3.0, 100.0):
            c = kr.constant_c(ModelParams(p, k, lam2 + off))
            assert c == pytest.approx(1.0, abs=1e-9)


def test_limit_constant_agrees_with_direct_weight_route():
    # Cross-check the reconditioned evaluation against the raw on-ridge
    # weight J at moderate signal strength, where both are well posed.
    for par in (ModelParams(3, 2, 5.0), ModelParams(4, 3, 6.0)):
        pred = tg.gse_predict(par)
        j_raw = sc.j_factor(pred.m_star, pred.y_star, par)
        assert kr.constant_c(par) == pytest.approx(j_raw, rel=1e-8)


def test_window_report_assembles_all_routes():
    rep = kr.window_report(DEEP_WINDOW, 100, PAR)
    assert rep.euler_char_exact == pytest.approx(1.0, abs=2e-2)
    assert rep.sharp_value is not None
    assert rep.constant_C == pytest.approx(1.0, abs=1e-9)
    assert rep.term_I + rep.term_II == pytest.approx(rep.euler_char_exact,
                                                     rel=0.05)
    assert rep.saddle_m == pytest.approx(tg.gse_predict(PAR).m_star,
                                         abs=1e-6)
