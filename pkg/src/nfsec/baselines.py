"""
Benchmark schemes and a brute-force oracle over the MRT focusing family.

The oracle exhaustively scores (r_S, r_A, alpha) triples with the exact
closed-form secrecy rate, angles pinned to the user and eavesdropper rays.
It is an upper reference for the MRT family only, not for arbitrary
precoders.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .design import BeamDesign, SearchSettings, assemble_mrt_design, design_proposed
from .model import (NLoSConfig, PolarPosition, SystemConfig, full_channel, los_channel,
                    steering_vector)
from .secrecy import Beamformer, RateReport, grid_alpha, omega_squared, rates_direct


class SchemeId(str, enum.Enum):
    PROPOSED = "proposed"
    SIGNAL_ONLY = "signal_only"
    NULLSPACE_AN = "nullspace_an"
    AN_AT_EVE = "an_at_eve"
    ORACLE = "oracle"

    @classmethod
    def parse(cls, name: str) -> "SchemeId":
        try:
            return cls(name.strip())
        except ValueError:
            known = ", ".join(s.value for s in cls)
            raise ValueError(f"unknown scheme {name!r} (expected one of {known})") from None


@dataclass(frozen=True)
class OracleGrids:
    rs_steps: int = 64
    ra_steps: int = 64
    alpha_steps: int = 64

    def __post_init__(self):
        if min(self.rs_steps, self.ra_steps, self.alpha_steps) < 1:
            raise ValueError("oracle grid sizes must be positive")


def design_signal_only(config: SystemConfig, user: PolarPosition, eve: PolarPosition) -> BeamDesign:
    """Focus on the user, no artificial noise."""
    design = assemble_mrt_design("signal_only", config, user, eve, user, eve, alpha=0.0)
    return replace(design, qa=None, z_dir=None)


def design_an_at_eve(config: SystemConfig, user: PolarPosition, eve: PolarPosition) -> BeamDesign:
    """Signal focused on the user, AN focused on the eavesdropper, closed-form split."""
    return assemble_mrt_design("an_at_eve", config, user, eve, user, eve)


def _split_rates(amp_user, amp_eve, alpha, p, noise):
    """Rates for unit directions given received amplitudes (signal, AN) per receiver."""
    alpha = np.asarray(alpha, dtype=float)
    s_b, z_b = amp_user
    s_e, z_e = amp_eve
    rb = np.log2(1.0 + (1 - alpha) * p * abs(s_b) ** 2 / (alpha * p * abs(z_b) ** 2 + noise))
    re = np.log2(1.0 + (1 - alpha) * p * abs(s_e) ** 2 / (alpha * p * abs(z_e) ** 2 + noise))
    return rb, re


def design_nullspace_an(config: SystemConfig, user: PolarPosition, eve: PolarPosition,
                        alpha_grid_steps: int = 1001) -> BeamDesign:
    """MRT signal to the user; AN steered at the eavesdropper inside the user's null space.

    The split is the grid argmax of the secrecy rate. When the two channels
    are parallel the null-space projection vanishes and no AN is sent.
    """
    ch_user = los_channel(config, user)
    ch_eve = los_channel(config, eve)
    h_b = ch_user.vector.conj()
    s_dir = h_b / np.linalg.norm(h_b)
    v = ch_eve.vector.conj()
    v = v / np.linalg.norm(v)
    u = v - s_dir * np.vdot(s_dir, v)
    norm_u = np.linalg.norm(u)
    p, noise = config.tx_power, config.noise_power

    if norm_u < 1e-9:
        z_dir = None
        alpha = 0.0
    else:
        z_dir = u / norm_u
        grid = np.linspace(0.0, 1.0, alpha_grid_steps, endpoint=False)
        amp_user = (ch_user.received(s_dir), ch_user.received(z_dir))
        amp_eve = (ch_eve.received(s_dir), ch_eve.received(z_dir))
        rb, re = _split_rates(amp_user, amp_eve, grid, p, noise)
        alpha = float(grid[int(np.argmax(np.maximum(rb - re, 0.0)))])

    w_s = math.sqrt((1 - alpha) * p) * s_dir
    w_z = math.sqrt(alpha * p) * z_dir if z_dir is not None else np.zeros_like(s_dir)
    bf = Beamformer(w_s=w_s, w_z=w_z, alpha=alpha)
    return BeamDesign(
        scheme="nullspace_an", qs=user, qa=None, alpha=alpha, beamformer=bf, rhos=None,
        rate=rates_direct(ch_user, ch_eve, bf, noise), s_dir=s_dir, z_dir=z_dir,
    )


def _ray_correlations(config: SystemConfig, receiver: PolarPosition, radii, angle: float) -> np.ndarray:
    a = steering_vector(config, receiver)
    out = np.empty(len(radii))
    for i, r in enumerate(radii):
        q = PolarPosition(float(r), angle)
        out[i] = 1.0 if q == receiver else min(abs(np.vdot(a, steering_vector(config, q))) / config.n_antennas, 1.0)
    return out


def oracle_grid_search(config: SystemConfig, user: PolarPosition, eve: PolarPosition,
                       grids: OracleGrids | None = None,
                       anchors: tuple[BeamDesign, ...] = (),
                       alphas=None, refine_alpha: bool = True) -> BeamDesign:
    """Exhaustive (r_S, r_A, alpha) search scored with exact correlations.

    The radius grids are log-spaced over the near-field annulus and always
    contain the user and eavesdropper radii; ``anchors`` add the focus
    radii and splits of other designs so the oracle never scores below
    them. The winning pair's split is then polished on a fine grid.
    Passing ``alphas`` pins the split grid exactly and skips the polish.
    Ties go to the first index in (r_S, r_A, alpha) order.
    """
    grids = grids or OracleGrids()
    lo, hi = config.near_field

    def radius_grid(steps, extra):
        base = np.geomspace(lo, hi, steps) if steps > 1 else np.array([lo])
        return np.unique(np.concatenate([base, extra]))

    anchor_rs = [d.qs.radius for d in anchors if d.qs is not None and d.qs.angle == user.angle]
    anchor_ra = [d.qa.radius for d in anchors if d.qa is not None and d.qa.angle == eve.angle]
    rs = radius_grid(grids.rs_steps, [user.radius, eve.radius] + anchor_rs)
    ra = radius_grid(grids.ra_steps, [user.radius, eve.radius] + anchor_ra)
    if alphas is None:
        alphas = np.unique(np.concatenate([
            np.linspace(0.0, 1.0, grids.alpha_steps, endpoint=False),
            [d.alpha for d in anchors],
        ]))
    else:
        alphas = np.asarray(alphas, dtype=float)
        refine_alpha = False

    rho1 = _ray_correlations(config, user, rs, user.angle)
    rho3 = _ray_correlations(config, eve, rs, user.angle)
    rho2 = _ray_correlations(config, user, ra, eve.angle)
    rho4 = _ray_correlations(config, eve, ra, eve.angle)
    g_b = los_channel(config, user).array_gain
    g_e = los_channel(config, eve).array_gain

    om = omega_squared(rho1[:, None, None] ** 2, rho2[None, :, None] ** 2,
                       rho3[:, None, None] ** 2, rho4[None, :, None] ** 2,
                       g_b, g_e, alphas[None, None, :], config.tx_power, config.noise_power)
    i, j, k = np.unravel_index(int(np.argmax(om)), om.shape)

    qs = PolarPosition(float(rs[i]), user.angle)
    qa = PolarPosition(float(ra[j]), eve.angle)
    alpha = float(alphas[k])
    design = assemble_mrt_design("oracle", config, user, eve, qs, qa, alpha=alpha)
    if refine_alpha and grids.alpha_steps > 1:
        fine = grid_alpha(design.rhos, g_b, g_e, config.tx_power, config.noise_power)
        candidate = assemble_mrt_design("oracle", config, user, eve, qs, qa, alpha=fine)
        if candidate.rate.secrecy_rate > design.rate.secrecy_rate:
            design = candidate
    return design


def build_design(scheme: SchemeId | str, config: SystemConfig, user: PolarPosition, eve: PolarPosition,
                 settings: SearchSettings | None = None, rho_mode: str = "exact",
                 oracle_grids: OracleGrids | None = None,
                 alpha_grid_steps: int = 1001,
                 anchors: tuple[BeamDesign, ...] | None = None) -> BeamDesign:
    """Design one scheme; the oracle is anchored on the cheap schemes' designs."""
    scheme = SchemeId.parse(scheme) if isinstance(scheme, str) else scheme
    if scheme is SchemeId.PROPOSED:
        return design_proposed(config, user, eve, settings, rho_mode=rho_mode)
    if scheme is SchemeId.SIGNAL_ONLY:
        return design_signal_only(config, user, eve)
    if scheme is SchemeId.NULLSPACE_AN:
        return design_nullspace_an(config, user, eve, alpha_grid_steps)
    if scheme is SchemeId.AN_AT_EVE:
        return design_an_at_eve(config, user, eve)
    if anchors is None:
        anchors = (design_proposed(config, user, eve, settings, rho_mode=rho_mode),
                   design_signal_only(config, user, eve),
                   design_an_at_eve(config, user, eve))
    return oracle_grid_search(config, user, eve, oracle_grids, anchors=anchors)


def rate_at_alpha(design: BeamDesign, channel_user, channel_eve, alpha: float, config: SystemConfig) -> RateReport:
    """Re-apply a different power split to a design's beam directions."""
    if design.z_dir is None:
        alpha = 0.0
        z_dir = np.zeros_like(design.s_dir)
    else:
        z_dir = design.z_dir
    p = config.tx_power
    bf = Beamformer(w_s=math.sqrt((1 - alpha) * p) * design.s_dir,
                    w_z=math.sqrt(alpha * p) * z_dir, alpha=alpha)
    return rates_direct(channel_user, channel_eve, bf, config.noise_power)


def realization_seed(base_seed: int, realization: int, role: int) -> int:
    """Independent, reproducible seed per (realization, receiver)."""
    return int(np.random.SeedSequence([base_seed, realization, role]).generate_state(1)[0])


def evaluate_design(design: BeamDesign, config: SystemConfig, user: PolarPosition, eve: PolarPosition,
                    nlos: NLoSConfig, num_realizations: int = 1) -> RateReport:
    """Average the rates of a fixed design over seeded NLoS channel draws."""
    if num_realizations < 1:
        raise ValueError(f"num_realizations must be >= 1, got {num_realizations}")
    if not nlos.enabled:
        return design.rate
    base = 0 if nlos.rng_seed is None else nlos.rng_seed
    rb, re = [], []
    for k in range(num_realizations):
        ch_user = full_channel(config, user, NLoSConfig(nlos.num_paths, nlos.power_offset_db,
                                                        realization_seed(base, k, 0)))
        ch_eve = full_channel(config, eve, NLoSConfig(nlos.num_paths, nlos.power_offset_db,
                                                      realization_seed(base, k, 1)))
        report = rates_direct(ch_user, ch_eve, design.beamformer, config.noise_power)
        rb.append(report.rate_user)
        re.append(report.rate_eve)
    n = num_realizations
    return RateReport.from_rates(math.fsum(rb) / n, math.fsum(re) / n)


def evaluate_scheme(scheme: SchemeId | str, config: SystemConfig, user: PolarPosition, eve: PolarPosition,
                    nlos: NLoSConfig | None = None, num_realizations: int = 1, **design_kwargs) -> RateReport:
    """Design on LoS channels, then score on LoS plus seeded NLoS paths."""
    if num_realizations < 1:
        raise ValueError(f"num_realizations must be >= 1, got {num_realizations}")
    design = build_design(scheme, config, user, eve, **design_kwargs)
    return evaluate_design(design, config, user, eve, nlos or NLoSConfig(), num_realizations)
