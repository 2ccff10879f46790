"""
Self-consistency checks shared by the ``validate`` command and the tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .correlation import correlation_set
from .design import SearchSettings, design_proposed
from .model import PolarPosition, SystemConfig, los_channel
from .secrecy import (NonConcaveRegimeError, alpha_polynomial, closed_form_secrecy, grid_alpha,
                      mrt_beamformers, optimal_alpha, rates_direct)


@dataclass(frozen=True)
class RandomScenario:
    user: PolarPosition
    eve: PolarPosition
    qs: PolarPosition
    qa: PolarPosition
    alpha: float


def random_position(rng, r_range=(3.0, 10.0), max_angle=0.05) -> PolarPosition:
    return PolarPosition(float(rng.uniform(*r_range)), float(rng.uniform(-max_angle, max_angle)))


def random_scenario(rng, r_range=(3.0, 10.0), max_angle=0.05) -> RandomScenario:
    return RandomScenario(
        user=random_position(rng, r_range, max_angle),
        eve=random_position(rng, r_range, max_angle),
        qs=random_position(rng, r_range, max_angle),
        qa=random_position(rng, r_range, max_angle),
        alpha=float(rng.uniform(0.0, 0.95)),
    )


def closed_vs_direct(config: SystemConfig, sc: RandomScenario) -> tuple[float, float]:
    """(closed-form secrecy rate, directly evaluated secrecy rate) for one scenario."""
    ch_user = los_channel(config, sc.user)
    ch_eve = los_channel(config, sc.eve)
    rhos = correlation_set(config, sc.user, sc.eve, sc.qs, sc.qa)
    closed = closed_form_secrecy(rhos, ch_user.array_gain, ch_eve.array_gain, sc.alpha,
                                 config.tx_power, config.noise_power)
    bf = mrt_beamformers(config, sc.qs, sc.qa, sc.alpha)
    direct = rates_direct(ch_user, ch_eve, bf, config.noise_power).secrecy_rate
    return closed, direct


@dataclass(frozen=True)
class SplitCheck:
    f0_positive: bool
    alpha_closed: float
    alpha_grid: float
    rate_closed: float
    rate_grid: float


def split_vs_grid(config: SystemConfig, user: PolarPosition, eve: PolarPosition,
                  settings: SearchSettings | None = None, grid_points: int = 10_000) -> SplitCheck:
    """Closed-form split of the proposed design against a dense alpha grid."""
    design = design_proposed(config, user, eve, settings)
    g_b = los_channel(config, user).array_gain
    g_e = los_channel(config, eve).array_gain
    p, noise = config.tx_power, config.noise_power
    poly = alpha_polynomial(design.rhos, g_b, g_e, p, noise)
    grid = np.arange(grid_points) / grid_points
    rates = closed_form_secrecy(design.rhos, g_b, g_e, grid, p, noise)
    best = int(np.argmax(rates))
    try:
        alpha = optimal_alpha(poly)
    except NonConcaveRegimeError:
        alpha = grid_alpha(design.rhos, g_b, g_e, p, noise)
    return SplitCheck(
        f0_positive=poly.f0 > 0,
        alpha_closed=alpha,
        alpha_grid=float(grid[best]),
        rate_closed=closed_form_secrecy(design.rhos, g_b, g_e, alpha, p, noise),
        rate_grid=float(rates[best]),
    )


def run_validation(config: SystemConfig, count: int = 200, seed: int = 0) -> dict:
    """Pass/fail counts for the equivalence and closed-form split checks."""
    rng = np.random.default_rng(seed)
    results = {"closed_form_vs_direct": [0, 0], "split_vs_grid": [0, 0]}
    for _ in range(count):
        closed, direct = closed_vs_direct(config, random_scenario(rng))
        ok = abs(closed - direct) < 1e-9
        results["closed_form_vs_direct"][0 if ok else 1] += 1
    for _ in range(max(1, count // 10)):
        check = split_vs_grid(config, random_position(rng), random_position(rng),
                              SearchSettings(grid_points=512))
        if check.f0_positive:
            ok = (abs(check.alpha_closed - check.alpha_grid) <= 1e-3
                  and check.rate_closed >= check.rate_grid - 1e-6)
        else:
            ok = check.alpha_grid == 0.0 and check.alpha_closed == 0.0
        results["split_vs_grid"][0 if ok else 1] += 1
    return {k: {"passed": v[0], "failed": v[1]} for k, v in results.items()}

