"""
Proposed AN-aided focusing design.

The signal focus stays on the user's ray and the AN focus on the
eavesdropper's ray; only the two radii are searched. Each radius comes
from its own one-dimensional search of a Fresnel-approximated power ratio,
independent of the other radius and of the power split. The split is then
set in closed form from the exact correlations at the chosen points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .correlation import BETA_SERIES_CUTOFF, CoincidentPointError, CorrelationSet, correlation_set
from .model import PolarPosition, SystemConfig, los_channel, steering_vector
from .secrecy import (AlphaPolynomial, Beamformer, NonConcaveRegimeError, RateReport,
                      alpha_polynomial, grid_alpha, mrt_beamformers, optimal_alpha,
                      rates_direct)

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class NoValidRadiusError(RuntimeError):
    pass


@dataclass(frozen=True)
class SearchSettings:
    """Coarse log-spaced scan followed by golden-section refinement.

    ``domain`` defaults to the near-field annulus of the config. With
    ``objective="exact"`` the scan evaluates true correlations instead of
    the Fresnel forms, at O(N) per point.
    """

    grid_points: int = 2048
    refine_tolerance: float = 1e-4
    domain: tuple[float, float] | None = None
    objective: str = "approx"

    def __post_init__(self):
        if self.grid_points < 16:
            raise ValueError(f"grid_points must be >= 16, got {self.grid_points}")
        if not self.refine_tolerance > 0:
            raise ValueError(f"refine_tolerance must be positive, got {self.refine_tolerance}")
        if self.objective not in ("approx", "exact"):
            raise ValueError(f"objective must be 'approx' or 'exact', got {self.objective!r}")
        if self.domain is not None and not 0 < self.domain[0] < self.domain[1]:
            raise ValueError(f"invalid search domain {self.domain}")

    def bounds(self, config: SystemConfig) -> tuple[float, float]:
        return self.domain if self.domain is not None else config.near_field


@dataclass(frozen=True)
class BeamDesign:
    scheme: str
    qs: PolarPosition
    qa: PolarPosition | None
    alpha: float
    beamformer: Beamformer
    rhos: CorrelationSet | None
    rate: RateReport
    # unit-norm signal and AN directions, so the split can be re-applied
    s_dir: np.ndarray = field(repr=False)
    z_dir: np.ndarray | None = field(repr=False, default=None)
    poly: AlphaPolynomial | None = None


class RatioObjective:
    """Approximate (rho(rx, Q)/rho(other, Q))^2 for Q on the receiver's ray.

    With ``rx`` the user and ``other`` the eavesdropper this is the signal
    focusing objective; swapping the roles gives the AN objective. Calls
    accept a scalar radius or an array of radii, return NaN where the focus
    point coincides with ``other``, and count evaluated points.
    """

    def __init__(self, config: SystemConfig, rx: PolarPosition, other: PolarPosition,
                 mode: str = "approx"):
        self.config = config
        self.rx = rx
        self.other = other
        self.mode = mode
        self.evaluations = 0

    def __call__(self, radii):
        r = np.atleast_1d(np.asarray(radii, dtype=float))
        self.evaluations += r.size
        if self.mode == "exact":
            values = self._exact(r)
        else:
            values = self._approx(r)
        return float(values[0]) if np.ndim(radii) == 0 else values

    def _approx(self, r):
        cfg = self.config
        scale = 2.0 * cfg.element_spacing**2 / cfg.wavelength
        half_n = 0.5 * cfg.n_antennas
        cos2_rx = 1.0 - self.rx.direction_cosine**2
        focus_curv = cos2_rx / r

        beta1 = half_n * np.sqrt(scale * np.abs(cos2_rx / self.rx.radius - focus_curv))
        s1, c1 = special.fresnel(beta1)
        with np.errstate(divide="ignore", invalid="ignore"):
            rho1_sq = np.where(beta1 < BETA_SERIES_CUTOFF,
                               (1.0 - (math.pi**2 / 90.0) * beta1**4) ** 2,
                               (c1**2 + s1**2) / beta1**2)

        gap = self.other.direction_cosine - self.rx.direction_cosine
        delta = np.abs((1.0 - self.other.direction_cosine**2) / self.other.radius - focus_curv)
        with np.errstate(divide="ignore", invalid="ignore"):
            beta3 = half_n * np.sqrt(scale * delta)
            beta2 = gap * (2.0 * cfg.element_spacing / cfg.wavelength) / np.sqrt(scale * delta)
            s_hi, c_hi = special.fresnel(beta2 + beta3)
            s_lo, c_lo = special.fresnel(beta2 - beta3)
            rho3_sq = ((c_hi - c_lo) ** 2 + (s_hi - s_lo) ** 2) / (4.0 * beta3**2)
        flat = delta == 0.0
        if np.any(flat):
            far = np.sinc(cfg.n_antennas * cfg.element_spacing * gap / cfg.wavelength) ** 2
            rho3_sq = np.where(flat, far if gap != 0.0 else np.nan, rho3_sq)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(rho3_sq > 0, rho1_sq / rho3_sq, np.nan)

    def _exact(self, r):
        cfg = self.config
        a_rx = steering_vector(cfg, self.rx)
        a_other = steering_vector(cfg, self.other)
        out = np.empty_like(r)
        for i, radius in enumerate(r):
            q = steering_vector(cfg, PolarPosition(radius, self.rx.angle))
            num = abs(np.vdot(a_rx, q)) ** 2
            den = abs(np.vdot(a_other, q)) ** 2
            out[i] = num / den if den > 0 else np.nan
        return out


def signal_objective(config: SystemConfig, user: PolarPosition, eve: PolarPosition, r_s: float) -> float:
    """Approximate (rho1/rho3)^2 for a signal focus at ``(r_s, user.angle)``."""
    value = RatioObjective(config, user, eve)(float(r_s))
    if math.isnan(value):
        raise CoincidentPointError(f"signal focus at r={r_s} coincides with the eavesdropper")
    return value


def an_objective(config: SystemConfig, user: PolarPosition, eve: PolarPosition, r_a: float) -> float:
    """Approximate (rho4/rho2)^2 for an AN focus at ``(r_a, eve.angle)``."""
    value = RatioObjective(config, eve, user)(float(r_a))
    if math.isnan(value):
        raise CoincidentPointError(f"AN focus at r={r_a} coincides with the user")
    return value


def _golden_max(f, a: float, b: float, tol: float):
    """Golden-section maximisation; ties move the bracket left.

    Returns every evaluated (x, f(x)) pair.
    """
    seen = []

    def g(x):
        v = float(f(x))
        v = -math.inf if math.isnan(v) else v
        seen.append((x, v))
        return v

    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1, f2 = g(x1), g(x2)
    while b - a > tol:
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - GOLDEN * (b - a)
            f1 = g(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + GOLDEN * (b - a)
            f2 = g(x2)
    return seen


def search_radius(objective, settings: SearchSettings, domain: tuple[float, float]) -> float:
    """Maximise ``objective`` over radii in ``domain``.

    ``objective`` must accept an array of radii. Ties are broken toward the
    smallest radius, NaN marks a degenerate radius.
    """
    lo, hi = domain
    grid = np.geomspace(lo, hi, settings.grid_points)
    values = np.asarray(objective(grid), dtype=float)
    values = np.where(np.isnan(values), -np.inf, values)
    if not np.any(np.isfinite(values)):
        raise NoValidRadiusError("objective is degenerate on the whole search domain")
    best = int(np.argmax(values))

    a = grid[max(best - 1, 0)]
    b = grid[min(best + 1, grid.size - 1)]
    candidates = [(grid[best], values[best])]
    candidates += _golden_max(objective, a, b, settings.refine_tolerance)
    top = max(v for _, v in candidates)
    return float(min(x for x, v in candidates if v == top))


def _alpha_for(rhos: CorrelationSet, g_b: float, g_e: float, config: SystemConfig):
    poly = alpha_polynomial(rhos, g_b, g_e, config.tx_power, config.noise_power)
    try:
        alpha = optimal_alpha(poly)
    except NonConcaveRegimeError:
        alpha = grid_alpha(rhos, g_b, g_e, config.tx_power, config.noise_power)
    return alpha, poly


def assemble_mrt_design(scheme: str, config: SystemConfig, user: PolarPosition, eve: PolarPosition,
                        qs: PolarPosition, qa: PolarPosition, alpha: float | None = None,
                        rho_mode: str = "exact") -> BeamDesign:
    """MRT focusing at ``qs``/``qa``; ``alpha=None`` picks the closed-form split."""
    rhos = correlation_set(config, user, eve, qs, qa, mode=rho_mode)
    ch_user = los_channel(config, user)
    ch_eve = los_channel(config, eve)
    poly = None
    if alpha is None:
        alpha, poly = _alpha_for(rhos, ch_user.array_gain, ch_eve.array_gain, config)
    bf = mrt_beamformers(config, qs, qa, alpha)
    unit = mrt_beamformers(config, qs, qa, 0.5)
    s_dir = unit.w_s / np.linalg.norm(unit.w_s)
    z_dir = unit.w_z / np.linalg.norm(unit.w_z)
    return BeamDesign(
        scheme=scheme, qs=qs, qa=qa, alpha=alpha, beamformer=bf, rhos=rhos,
        rate=rates_direct(ch_user, ch_eve, bf, config.noise_power),
        s_dir=s_dir, z_dir=z_dir, poly=poly,
    )


def focus_radii(config: SystemConfig, user: PolarPosition, eve: PolarPosition,
                settings: SearchSettings | None = None) -> tuple[float, float]:
    """The two decoupled radius searches: (r_S, r_A)."""
    settings = settings or SearchSettings()
    domain = settings.bounds(config)
    r_s = search_radius(RatioObjective(config, user, eve, settings.objective), settings, domain)
    r_a = search_radius(RatioObjective(config, eve, user, settings.objective), settings, domain)
    return r_s, r_a


def design_proposed(config: SystemConfig, user: PolarPosition, eve: PolarPosition,
                    settings: SearchSettings | None = None, rho_mode: str = "exact") -> BeamDesign:
    r_s, r_a = focus_radii(config, user, eve, settings)
    qs = PolarPosition(r_s, user.angle)
    qa = PolarPosition(r_a, eve.angle)
    return assemble_mrt_design("proposed", config, user, eve, qs, qa, rho_mode=rho_mode)
