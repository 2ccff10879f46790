import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from nfsec.correlation import (CoincidentPointError, CorrelationSet, beta_aligned, beta_cross,
                               correlation_approx, correlation_exact, correlation_set, fresnel_c,
                               fresnel_s, rho_aligned_approx, rho_cross_approx)
from nfsec.model import PolarPosition, reference_config


@pytest.fixture(scope="module")
def cfg():
    return reference_config()


def _quad_fresnel(x):
    c, _ = integrate.quad(lambda t: math.cos(math.pi * t * t / 2), 0, x, limit=200)
    s, _ = integrate.quad(lambda t: math.sin(math.pi * t * t / 2), 0, x, limit=200)
    return c, s


def test_fresnel_reference_values():
    assert fresnel_c(0.0) == 0.0 and fresnel_s(0.0) == 0.0
    assert fresnel_c(1.0) == pytest.approx(0.7798934004, abs=1e-10)
    assert fresnel_s(1.0) == pytest.approx(0.4382591474, abs=1e-10)
    assert abs(fresnel_c(50.0) - 0.5) < 0.01
    assert fresnel_c(-1.0) == -fresnel_c(1.0)


@pytest.mark.parametrize("x", [0.3, 1.0, 2.0, 3.7])
def test_fresnel_matches_quadrature(x):
    c, s = _quad_fresnel(x)
    assert fresnel_c(x) == pytest.approx(c, abs=1e-9)
    assert fresnel_s(x) == pytest.approx(s, abs=1e-9)


def test_fresnel_magnitude_bounded_past_three():
    # the first spiral lobe past x = 3 peaks near x = 3.0817 at 0.65619
    x = np.linspace(3.0, 100.0, 200001)
    mag = fresnel_c(x) ** 2 + fresnel_s(x) ** 2
    assert np.max(mag) <= 0.6562
    assert np.max(mag[x >= 3.2]) <= 0.65


def test_rho_aligned_values():
    assert rho_aligned_approx(0.0) == 1.0
    assert rho_aligned_approx(1e-6) == pytest.approx(1.0, abs=1e-12)
    c, s = _quad_fresnel(2.0)
    assert rho_aligned_approx(2.0) == pytest.approx(math.hypot(c, s) / 2.0, abs=1e-9)
    assert rho_aligned_approx(2.0) == pytest.approx(0.2984651, abs=1e-6)


def test_rho_aligned_continuous_at_cutoff():
    below = rho_aligned_approx(0.99999e-4)
    above = rho_aligned_approx(1.00001e-4)
    assert abs(below - above) < 1e-12


def test_rho_cross_symmetric_limit():
    b = 0.7
    # beta2 = 0 integrates a symmetric window of half-width b, same as the aligned form
    assert rho_cross_approx(0.0, b) == pytest.approx(rho_aligned_approx(b), abs=1e-12)
    with pytest.raises(ValueError):
        rho_cross_approx(0.1, 0.0)


def test_beta_aligned_matches_formula(cfg):
    d = cfg.element_spacing
    expected = cfg.n_antennas / 2 * math.sqrt(d * abs(1 / 5 - 1 / 6))
    assert beta_aligned(cfg, 5.0, 6.0, 0.0) == pytest.approx(expected, rel=1e-12)
    assert beta_aligned(cfg, 5.0, 5.0, 0.3) == 0.0


def test_beta_cross_edge_cases(cfg):
    pos = PolarPosition(5.0, 0.01)
    with pytest.raises(CoincidentPointError):
        beta_cross(cfg, pos, pos)
    # same curvature, different angle sign: far-field limit
    b2, b3 = beta_cross(cfg, PolarPosition(5.0, 0.01), PolarPosition(5.0, -0.01))
    assert math.isinf(b2) and b3 == 0.0


def test_correlation_identity(cfg):
    pos = PolarPosition(4.0, 0.02)
    assert correlation_exact(cfg, pos, pos) == 1.0
    assert correlation_approx(cfg, pos, pos) == 1.0


positions = st.builds(PolarPosition, st.floats(2.6, 20.0), st.floats(-0.5, 0.5))


@settings(max_examples=200, deadline=None)
@given(a=positions, b=positions)
def test_correlation_symmetric_and_bounded(cfg, a, b):
    ab = correlation_exact(cfg, a, b)
    ba = correlation_exact(cfg, b, a)
    assert abs(ab - ba) <= 1e-14
    assert 0.0 < ab <= 1.0


def test_approx_tracks_exact_along_ray(cfg):
    user = PolarPosition(5.0, 0.0)
    for r in np.linspace(3.0, 7.0, 41):
        q = PolarPosition(float(r), 0.0)
        assert abs(correlation_approx(cfg, user, q) - correlation_exact(cfg, user, q)) < 0.01


def test_approx_far_field_limit(cfg):
    a = PolarPosition(5.0, 0.002)
    b = PolarPosition(5.0, -0.002)
    assert abs(correlation_approx(cfg, a, b) - correlation_exact(cfg, a, b)) < 0.02


def test_correlation_set_modes(cfg):
    user, eve = PolarPosition(5.0, 0.0), PolarPosition(3.5, 0.0)
    qs, qa = PolarPosition(5.5, 0.0), PolarPosition(3.3, 0.0)
    exact = correlation_set(cfg, user, eve, qs, qa)
    approx = correlation_set(cfg, user, eve, qs, qa, mode="approx")
    np.testing.assert_allclose(exact.as_array(), approx.as_array(), atol=0.01)
    with pytest.raises(ValueError):
        correlation_set(cfg, user, eve, qs, qa, mode="bogus")


def test_correlation_set_validation():
    with pytest.raises(ValueError):
        CorrelationSet(0.0, 0.5, 0.5, 0.5)
    with pytest.raises(ValueError):
        CorrelationSet(0.5, 1.1, 0.5, 0.5)
