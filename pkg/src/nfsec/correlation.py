"""
Steering-vector correlations, exact and via Fresnel integrals.

The Fresnel-based forms treat the element sum as an integral over the
aperture and keep phase terms up to second order in the element offset.
Angles enter through direction cosines ``sin(theta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, astuple

import numpy as np
from scipy import special

from .model import PolarPosition, SystemConfig, steering_vector

# below this the aligned approximation is replaced by its series limit
BETA_SERIES_CUTOFF = 1e-4


class CoincidentPointError(ValueError):
    """Raised when the Fresnel approximation is asked about two identical points."""


def fresnel_c(x):
    """C(x) = integral of cos(pi t^2 / 2) from 0 to x."""
    s, c = special.fresnel(x)
    return c


def fresnel_s(x):
    """S(x) = integral of sin(pi t^2 / 2) from 0 to x."""
    s, c = special.fresnel(x)
    return s


@dataclass(frozen=True)
class CorrelationSet:
    """rho1 = (user, Q_S), rho2 = (user, Q_A), rho3 = (eve, Q_S), rho4 = (eve, Q_A)."""

    rho1: float
    rho2: float
    rho3: float
    rho4: float

    def __post_init__(self):
        for name, value in zip(("rho1", "rho2", "rho3", "rho4"), astuple(self)):
            if not (0.0 < value <= 1.0 + 1e-9):
                raise ValueError(f"{name} must lie in (0, 1], got {value}")

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self))


@dataclass(frozen=True)
class BetaParams:
    beta1: float
    beta2: float
    beta3: float


def correlation_exact(config: SystemConfig, pos_a: PolarPosition, pos_b: PolarPosition) -> float:
    """(1/N) |a(pos_a)^H a(pos_b)| by direct summation over the elements."""
    if pos_a == pos_b:
        return 1.0
    a = steering_vector(config, pos_a)
    b = steering_vector(config, pos_b)
    value = abs(np.vdot(a, b)) / config.n_antennas
    return min(float(value), 1.0)


def _curvature(config: SystemConfig, pos: PolarPosition) -> float:
    cos2 = 1.0 - pos.direction_cosine**2
    return cos2 / pos.radius


def _radicand_scale(config: SystemConfig) -> float:
    # t = delta * d * sqrt(2|Delta| / lambda); reduces to sqrt(d |Delta|) when d = lambda / 2
    return 2.0 * config.element_spacing**2 / config.wavelength


def beta_aligned(config: SystemConfig, r_ref: float, r_focus: float, dir_cos: float) -> float:
    """Fresnel argument for two points sharing the direction cosine ``dir_cos``."""
    delta = abs((1.0 - dir_cos**2) / r_ref - (1.0 - dir_cos**2) / r_focus)
    return 0.5 * config.n_antennas * math.sqrt(_radicand_scale(config) * delta)


def beta_cross(config: SystemConfig, pos_other: PolarPosition, focus: PolarPosition) -> tuple[float, float]:
    """(beta2, beta3) for a receiver at ``pos_other`` and a focus point ``focus``.

    ``beta2`` carries the direction-cosine gap, ``beta3`` the curvature gap.
    When the curvatures match but the angles differ, ``beta2`` is infinite
    and ``beta3`` zero; :func:`correlation_approx` resolves that limit.
    """
    gap = pos_other.direction_cosine - focus.direction_cosine
    delta = abs(_curvature(config, pos_other) - _curvature(config, focus))
    if delta == 0.0:
        if gap == 0.0:
            raise CoincidentPointError(
                f"focus {focus} coincides with the receiver; the correlation is 1 by definition")
        return (math.copysign(math.inf, gap), 0.0)
    # beta2 = gap * (2d / lambda) / sqrt(2 d^2 |Delta| / lambda)
    beta2 = gap * (2.0 * config.element_spacing / config.wavelength) / math.sqrt(_radicand_scale(config) * delta)
    beta3 = 0.5 * config.n_antennas * math.sqrt(_radicand_scale(config) * delta)
    return (beta2, beta3)


def rho_aligned_approx(beta1: float) -> float:
    """|C(b) + j S(b)| / b, continuous at b = 0 with value 1."""
    if beta1 < 0:
        raise ValueError(f"beta1 must be >= 0, got {beta1}")
    if beta1 < BETA_SERIES_CUTOFF:
        # C(b) = b - (pi^2/40) b^5 + ..., S(b) = (pi/6) b^3 - ...
        return 1.0 - (math.pi**2 / 90.0) * beta1**4
    s, c = special.fresnel(beta1)
    return float(math.hypot(c, s) / beta1)


def rho_cross_approx(beta2: float, beta3: float) -> float:
    """|C~ + j S~| / (2 beta3) with C~ = C(b2 + b3) - C(b2 - b3), S~ alike."""
    if not beta3 > 0:
        raise ValueError(f"beta3 must be positive, got {beta3}")
    s_hi, c_hi = special.fresnel(beta2 + beta3)
    s_lo, c_lo = special.fresnel(beta2 - beta3)
    return float(math.hypot(c_hi - c_lo, s_hi - s_lo) / (2.0 * beta3))


def _far_field_limit(config: SystemConfig, gap: float) -> float:
    # equal curvature: pure linear phase across the aperture
    x = config.n_antennas * config.element_spacing * gap / config.wavelength
    return abs(float(np.sinc(x)))


def correlation_approx(config: SystemConfig, receiver: PolarPosition, focus: PolarPosition) -> float:
    """Fresnel approximation of :func:`correlation_exact`.

    Pairs on the same ray use the aligned form (which is 1 at coincidence);
    other pairs use the cross form.
    """
    if receiver.angle == focus.angle:
        beta1 = beta_aligned(config, receiver.radius, focus.radius, receiver.direction_cosine)
        return min(rho_aligned_approx(beta1), 1.0)
    beta2, beta3 = beta_cross(config, receiver, focus)
    if beta3 == 0.0:
        return _far_field_limit(config, receiver.direction_cosine - focus.direction_cosine)
    return min(rho_cross_approx(beta2, beta3), 1.0)


def correlation_set(config: SystemConfig, user: PolarPosition, eve: PolarPosition,
                    qs: PolarPosition, qa: PolarPosition, mode: str = "exact") -> CorrelationSet:
    if mode == "exact":
        rho = correlation_exact
    elif mode == "approx":
        rho = correlation_approx
    else:
        raise ValueError(f"unknown correlation mode {mode!r}")
    return CorrelationSet(
        rho1=rho(config, user, qs),
        rho2=rho(config, user, qa),
        rho3=rho(config, eve, qs),
        rho4=rho(config, eve, qa),
    )
