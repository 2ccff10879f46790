import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nfsec.checks import closed_vs_direct, random_scenario
from nfsec.correlation import CorrelationSet
from nfsec.model import ChannelState, PolarPosition, los_channel, reference_config
from nfsec.secrecy import (AlphaPolynomial, DegenerateCorrelationError, NonConcaveRegimeError,
                           RateReport, alpha_polynomial, closed_form_secrecy, grid_alpha,
                           mrt_beamformers, noise_free_secrecy, omega, optimal_alpha, rates_direct)


@pytest.fixture(scope="module")
def cfg():
    return reference_config()


def test_rate_report_clamps():
    assert RateReport.from_rates(1.0, 3.0).secrecy_rate == 0.0
    assert RateReport.from_rates(3.0, 1.0).secrecy_rate == 2.0


def test_beamformer_power_split(cfg):
    bf = mrt_beamformers(cfg, PolarPosition(5.0, 0.0), PolarPosition(3.5, 0.0), 0.3)
    assert bf.signal_power == pytest.approx(0.7 * cfg.tx_power, rel=1e-12)
    assert bf.an_power == pytest.approx(0.3 * cfg.tx_power, rel=1e-12)
    with pytest.raises(ValueError):
        mrt_beamformers(cfg, PolarPosition(5.0, 0.0), PolarPosition(3.5, 0.0), 1.0)


def test_rates_shape_mismatch(cfg):
    bf = mrt_beamformers(cfg, PolarPosition(5.0, 0.0), PolarPosition(3.5, 0.0), 0.3)
    short = ChannelState(vector=np.ones(4, complex), los_coeff=1.0, array_gain=4.0)
    with pytest.raises(ValueError):
        rates_direct(short, short, bf, cfg.noise_power)


def test_closed_form_matches_direct(cfg):
    rng = np.random.default_rng(11)
    for _ in range(50):
        closed, direct = closed_vs_direct(cfg, random_scenario(rng))
        assert abs(closed - direct) < 1e-9


def test_no_an_focus_at_user_is_snr_gap(cfg):
    user, eve = PolarPosition(5.0, 0.0), PolarPosition(3.5, 0.0)
    ch_b, ch_e = los_channel(cfg, user), los_channel(cfg, eve)
    bf = mrt_beamformers(cfg, user, eve, 0.0)
    report = rates_direct(ch_b, ch_e, bf, cfg.noise_power)
    snr_b = cfg.tx_power * ch_b.array_gain / cfg.noise_power
    assert report.rate_user == pytest.approx(math.log2(1 + snr_b), rel=1e-12)


rho = st.floats(0.01, 1.0)


@settings(max_examples=300, deadline=None)
@given(r1=rho, r2=rho, r3=rho, r4=rho, alpha=st.floats(0.0, 0.99))
def test_secrecy_nonnegative_and_omega_form(cfg, r1, r2, r3, r4, alpha):
    rhos = CorrelationSet(r1, r2, r3, r4)
    g = los_channel(cfg, PolarPosition(5.0, 0.0)).array_gain
    rate = closed_form_secrecy(rhos, g, 2 * g, alpha, cfg.tx_power, cfg.noise_power)
    assert rate >= 0.0
    om = omega(rhos, g, 2 * g, alpha, cfg.tx_power, cfg.noise_power)
    assert rate == pytest.approx(max(math.log2(om), 0.0), abs=1e-12)


def test_closed_form_vectorised(cfg):
    rhos = CorrelationSet(0.9, 0.2, 0.3, 0.8)
    g = 1e-7
    grid = np.linspace(0.0, 0.9, 7)
    vec = closed_form_secrecy(rhos, g, g, grid, cfg.tx_power, cfg.noise_power)
    scalar = [closed_form_secrecy(rhos, g, g, a, cfg.tx_power, cfg.noise_power) for a in grid]
    np.testing.assert_allclose(vec, scalar, rtol=0, atol=1e-15)
    with pytest.raises(ValueError):
        closed_form_secrecy(rhos, g, g, np.array([0.1, 1.0]), cfg.tx_power, cfg.noise_power)


def test_noise_free_limit(cfg):
    rhos = CorrelationSet(0.9, 0.2, 0.3, 0.8)
    huge = 1e12
    alpha = 0.25
    closed = closed_form_secrecy(rhos, huge, huge, alpha, cfg.tx_power, cfg.noise_power)
    assert noise_free_secrecy(rhos, alpha) == pytest.approx(closed, rel=1e-6)
    with pytest.raises(DegenerateCorrelationError):
        noise_free_secrecy(CorrelationSet(0.9, 1e-13, 0.3, 0.8), alpha)
    with pytest.raises(ValueError):
        noise_free_secrecy(rhos, 0.0)


def _numerator_fd(rhos, g_b, g_e, p, noise, alpha, h=1e-7):
    # dOmega/dalpha * (A + C)^2 by central differences
    r = rhos.as_array() ** 2
    from nfsec.secrecy import _abc
    a, b, c = _abc(*r, g_b, g_e, alpha, p, noise)
    d_om = (omega(rhos, g_b, g_e, alpha + h, p, noise) - omega(rhos, g_b, g_e, alpha - h, p, noise)) / (2 * h)
    return d_om * (a + c) ** 2


@pytest.mark.parametrize("seed", range(5))
def test_polynomial_matches_derivative(cfg, seed):
    rng = np.random.default_rng(seed)
    rhos = CorrelationSet(*rng.uniform(0.05, 1.0, 4))
    g_b, g_e = 1.3e-7, rng.uniform(0.5, 3.0) * 1.3e-7
    p, noise = cfg.tx_power, cfg.noise_power
    poly = alpha_polynomial(rhos, g_b, g_e, p, noise)
    for alpha in rng.uniform(0.05, 0.95, 5):
        fd = _numerator_fd(rhos, g_b, g_e, p, noise, alpha)
        scale = max(abs(poly.f0), abs(poly.f1), abs(poly.f2))
        assert abs(poly(alpha) - fd) <= 1e-6 * scale


def test_optimal_alpha_regimes():
    assert optimal_alpha(AlphaPolynomial(f0=-1.0, f1=0.0, f2=-1.0)) == 0.0
    assert optimal_alpha(AlphaPolynomial(f0=0.0, f1=1.0, f2=-1.0)) == 0.0
    # -a^2 + 0.25 has its positive root at 0.5
    assert optimal_alpha(AlphaPolynomial(f0=0.25, f1=0.0, f2=-1.0)) == pytest.approx(0.5)
    with pytest.raises(NonConcaveRegimeError):
        optimal_alpha(AlphaPolynomial(f0=1.0, f1=0.0, f2=1.0))
    assert optimal_alpha(AlphaPolynomial(f0=100.0, f1=0.0, f2=-1.0)) < 1.0


def test_optimal_alpha_matches_grid(cfg):
    user, eve = PolarPosition(5.0, 0.0), PolarPosition(3.5, 0.0)
    from nfsec.correlation import correlation_set
    rhos = correlation_set(cfg, user, eve, PolarPosition(5.58, 0.0), PolarPosition(3.26, 0.0))
    g_b = los_channel(cfg, user).array_gain
    g_e = los_channel(cfg, eve).array_gain
    poly = alpha_polynomial(rhos, g_b, g_e, cfg.tx_power, cfg.noise_power)
    assert poly.f0 > 0
    closed = optimal_alpha(poly)
    grid = grid_alpha(rhos, g_b, g_e, cfg.tx_power, cfg.noise_power)
    assert abs(closed - grid) <= 1e-3
