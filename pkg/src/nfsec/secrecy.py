"""
MRT beamformers, secrecy-rate evaluation and the optimal AN power split.

``alpha`` is the fraction of the transmit power spent on artificial noise.
For MRT focusing on LoS channels the rates reduce to functions of the four
steering correlations and the array gains ``g = N |h_LoS|^2``; the
closed-form path below uses that reduction, :func:`rates_direct` does not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .correlation import CorrelationSet
from .model import ChannelState, PolarPosition, SystemConfig, los_channel

ALPHA_MAX = 1.0 - 1e-9
DEGENERATE_RHO = 1e-12


class DegenerateCorrelationError(ValueError):
    pass


class NonConcaveRegimeError(ArithmeticError):
    """The alpha polynomial has F2 >= 0; the positive-root selection does not apply."""


@dataclass(frozen=True)
class Beamformer:
    w_s: np.ndarray
    w_z: np.ndarray
    alpha: float

    @property
    def signal_power(self) -> float:
        return float(np.vdot(self.w_s, self.w_s).real)

    @property
    def an_power(self) -> float:
        return float(np.vdot(self.w_z, self.w_z).real)


@dataclass(frozen=True)
class RateReport:
    rate_user: float
    rate_eve: float
    secrecy_rate: float

    @classmethod
    def from_rates(cls, rate_user: float, rate_eve: float) -> "RateReport":
        return cls(rate_user, rate_eve, max(rate_user - rate_eve, 0.0))


@dataclass(frozen=True)
class AlphaPolynomial:
    """Numerator of dOmega/dalpha: f2 a^2 + f1 a + f0."""

    f0: float
    f1: float
    f2: float

    def __call__(self, alpha):
        return (self.f2 * alpha + self.f1) * alpha + self.f0


def _check_alpha(alpha: float):
    if not (0.0 <= alpha < 1.0):
        raise ValueError(f"alpha must lie in [0, 1), got {alpha}")


def mrt_beamformers(config: SystemConfig, qs: PolarPosition, qa: PolarPosition, alpha: float) -> Beamformer:
    """Matched filters toward the LoS channels of ``qs`` and ``qa``."""
    _check_alpha(alpha)
    h_s = los_channel(config, qs).vector.conj()
    h_a = los_channel(config, qa).vector.conj()
    p = config.tx_power
    w_s = math.sqrt((1.0 - alpha) * p) * h_s / np.linalg.norm(h_s)
    w_z = math.sqrt(alpha * p) * h_a / np.linalg.norm(h_a)
    return Beamformer(w_s=w_s, w_z=w_z, alpha=alpha)


def _rate(channel: ChannelState, bf: Beamformer, noise_power: float) -> float:
    signal = abs(channel.received(bf.w_s)) ** 2
    interference = abs(channel.received(bf.w_z)) ** 2
    return math.log2(1.0 + signal / (interference + noise_power))


def rates_direct(channel_user: ChannelState, channel_eve: ChannelState,
                 bf: Beamformer, noise_power: float) -> RateReport:
    """Rates from the received powers, no structural assumptions on the channels."""
    if not (channel_user.vector.shape == channel_eve.vector.shape == bf.w_s.shape == bf.w_z.shape):
        raise ValueError("channel and beamformer lengths differ")
    return RateReport.from_rates(_rate(channel_user, bf, noise_power),
                                 _rate(channel_eve, bf, noise_power))


def _abc(r1, r2, r3, r4, g_b, g_e, alpha, p, noise):
    # r1..r4 are squared correlations; broadcasts over arrays
    a = alpha**2 * p**2 * r2 * r4 * g_b * g_e + alpha * p * noise * (r2 * g_b + r4 * g_e) + noise**2
    b = (1.0 - alpha) * p * r1 * g_b * (alpha * p * r4 * g_e + noise)
    c = (1.0 - alpha) * p * r3 * g_e * (alpha * p * r2 * g_b + noise)
    return a, b, c


def omega(rhos: CorrelationSet, g_b: float, g_e: float, alpha, p: float, noise: float):
    """(A + B) / (A + C); the secrecy rate is log2 of this when positive."""
    sq = rhos.as_array() ** 2
    return omega_squared(*sq, g_b, g_e, alpha, p, noise)


def omega_squared(r1, r2, r3, r4, g_b, g_e, alpha, p, noise):
    """:func:`omega` on squared correlations, broadcasting over arrays."""
    a, b, c = _abc(r1, r2, r3, r4, g_b, g_e, alpha, p, noise)
    return (a + b) / (a + c)


def closed_form_secrecy(rhos: CorrelationSet, g_b: float, g_e: float, alpha,
                        p: float, noise: float):
    """Secrecy rate of MRT focusing on LoS channels, clamped at zero.

    Accepts a scalar or an array of ``alpha`` values.
    """
    alpha_arr = np.asarray(alpha, dtype=float)
    if np.any((alpha_arr < 0) | (alpha_arr >= 1)):
        raise ValueError("alpha must lie in [0, 1)")
    rate = np.maximum(np.log2(omega(rhos, g_b, g_e, alpha_arr, p, noise)), 0.0)
    return float(rate) if rate.ndim == 0 else rate


def noise_free_secrecy(rhos: CorrelationSet, alpha: float) -> float:
    """High-SNR secrecy rate, log2((eta + rho1^2/rho2^2) / (eta + rho3^2/rho4^2))."""
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if rhos.rho2 < DEGENERATE_RHO or rhos.rho4 < DEGENERATE_RHO:
        raise DegenerateCorrelationError("rho2 or rho4 is numerically zero")
    eta = alpha / (1.0 - alpha)
    user_ratio = (rhos.rho1 / rhos.rho2) ** 2
    eve_ratio = (rhos.rho3 / rhos.rho4) ** 2
    return max(math.log2((eta + user_ratio) / (eta + eve_ratio)), 0.0)


def alpha_polynomial(rhos: CorrelationSet, g_b: float, g_e: float, p: float, noise: float) -> AlphaPolynomial:
    r1, r2, r3, r4 = rhos.rho1**2, rhos.rho2**2, rhos.rho3**2, rhos.rho4**2
    s = noise
    f0 = p * s * (p**2 * g_b * g_e * r1 * r3 * (g_e * r4 - g_b * r2)
                  + p * s * (r3 * r4 * g_e**2 - r1 * r2 * g_b**2)
                  + s**2 * (r3 * g_e - r1 * g_b))
    f1 = 2.0 * p**2 * g_b * g_e * s * (p * g_b * r1 * r2 * (r3 - r4)
                                       + p * g_e * r3 * r4 * (r2 - r1)
                                       + s * (r2 * r3 - r1 * r4))
    f2 = p**3 * g_b * g_e * (p * g_b * g_e * r2 * r4 * (r2 * r3 - r1 * r4)
                             + g_b * r2 * r3 * s * (r2 - r1)
                             + g_e * r1 * r4 * s * (r3 - r4))
    return AlphaPolynomial(f0=f0, f1=f1, f2=f2)


def optimal_alpha(poly: AlphaPolynomial) -> float:
    """Root of the derivative numerator when F0 > 0, otherwise no AN.

    Raises :class:`NonConcaveRegimeError` when F2 >= 0 and F0 > 0; callers
    fall back to a grid search.
    """
    if poly.f0 <= 0:
        return 0.0
    if poly.f2 >= 0:
        raise NonConcaveRegimeError(f"F2 = {poly.f2:g} is not negative")
    disc = poly.f1**2 - 4.0 * poly.f2 * poly.f0
    if disc < 0:
        raise ArithmeticError("negative discriminant with F0 > 0 and F2 < 0")
    # F0 > 0, F2 < 0: the roots have opposite signs; this one is positive
    alpha = (-poly.f1 - math.sqrt(disc)) / (2.0 * poly.f2)
    return min(max(alpha, 0.0), ALPHA_MAX)


def grid_alpha(rhos: CorrelationSet, g_b: float, g_e: float, p: float, noise: float,
               steps: int = 10_001) -> float:
    """Grid argmax of the closed-form secrecy rate over [0, 1)."""
    grid = np.linspace(0.0, 1.0, steps, endpoint=False)
    return float(grid[int(np.argmax(closed_form_secrecy(rhos, g_b, g_e, grid, p, noise)))])


def an_gain_heuristic(g_b: float, g_e: float) -> bool:
    """Diagnostic only: AN tends to help when the eavesdropper has the larger gain."""
    return g_e > g_b
