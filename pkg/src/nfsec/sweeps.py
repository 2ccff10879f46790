"""
Parameter sweeps and focusing maps built on top of a :class:`Scenario`.

Sweep points are independent and may run on a thread pool (capped by the
``NFSEC_THREADS`` environment variable); results are always assembled in
axis order so the output does not depend on scheduling.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .baselines import (SchemeId, build_design, design_an_at_eve, design_signal_only,
                        evaluate_design, oracle_grid_search, rate_at_alpha)
from .design import BeamDesign, design_proposed
from .model import PolarPosition, element_offsets, los_channel
from .scenario import Scenario


@dataclass
class SweepResult:
    axis_name: str
    axis_values: np.ndarray
    schemes: tuple
    table: np.ndarray
    metadata: dict = field(default_factory=dict)

    def column(self, scheme) -> np.ndarray:
        name = scheme.value if isinstance(scheme, SchemeId) else scheme
        return self.table[:, [s.value for s in self.schemes].index(name)]


@dataclass
class SpectrumMap:
    which: str
    radii: np.ndarray
    angles: np.ndarray
    values: np.ndarray  # shape (len(angles), len(radii))
    design: BeamDesign
    metadata: dict = field(default_factory=dict)

    def peak_radius(self, angle_index: int | None = None) -> float:
        """Radius of the maximum along one angle row (default: the row nearest 0 rad)."""
        if angle_index is None:
            angle_index = int(np.argmin(np.abs(self.angles)))
        return float(self.radii[int(np.argmax(self.values[angle_index]))])


def max_workers() -> int:
    env = os.environ.get("NFSEC_THREADS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


def ordered_map(fn, items):
    items = list(items)
    workers = min(max_workers(), len(items)) or 1
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _metadata(scenario: Scenario, **extra) -> dict:
    meta = {"scenario": scenario.digest, "seed": scenario.seed, "version": __version__}
    meta.update(extra)
    return meta


def scenario_designs(scenario: Scenario, eve: PolarPosition | None = None) -> dict:
    """Every requested scheme's design, with the oracle anchored on the others."""
    cfg, user = scenario.system, scenario.user
    eve = eve or scenario.eve
    kw = scenario.design_kwargs()
    designs = {}
    for scheme in scenario.schemes:
        if scheme is not SchemeId.ORACLE:
            designs[scheme] = build_design(scheme, cfg, user, eve, **kw)
    if SchemeId.ORACLE in scenario.schemes:
        anchors = (designs.get(SchemeId.PROPOSED) or design_proposed(cfg, user, eve, scenario.search,
                                                                    rho_mode=scenario.correlation_mode),
                   designs.get(SchemeId.SIGNAL_ONLY) or design_signal_only(cfg, user, eve),
                   designs.get(SchemeId.AN_AT_EVE) or design_an_at_eve(cfg, user, eve))
        designs[SchemeId.ORACLE] = build_design(SchemeId.ORACLE, cfg, user, eve, anchors=anchors, **kw)
    return designs


def sweep_alpha(scenario: Scenario, alpha_grid) -> SweepResult:
    """Secrecy rate of each scheme with the power split forced to each grid value.

    Each scheme keeps the beam directions of its own design; the oracle
    re-optimises its focus radii at every forced split. A scheme without
    an AN beam reports its no-AN rate throughout.
    """
    alphas = np.asarray(alpha_grid, dtype=float)
    if alphas.ndim != 1 or alphas.size == 0 or np.any((alphas < 0) | (alphas >= 1)):
        raise ValueError("alpha grid must be a non-empty 1-D sequence within [0, 1)")
    cfg, user, eve = scenario.system, scenario.user, scenario.eve
    designs = scenario_designs(scenario)
    ch_user, ch_eve = los_channel(cfg, user), los_channel(cfg, eve)

    anchors = tuple(d for s, d in designs.items() if s is not SchemeId.ORACLE)

    def column(scheme):
        design = designs[scheme]
        if scheme is SchemeId.ORACLE:
            return [oracle_grid_search(cfg, user, eve, scenario.oracle_grids, anchors=anchors,
                                       alphas=[a]).rate.secrecy_rate for a in alphas]
        return [rate_at_alpha(design, ch_user, ch_eve, float(a), cfg).secrecy_rate for a in alphas]

    table = np.array(ordered_map(column, scenario.schemes)).T
    extra = {f"alpha_star_{s.value}": designs[s].alpha for s in scenario.schemes}
    return SweepResult("alpha", alphas, scenario.schemes, table, _metadata(scenario, **extra))


def sweep_re(scenario: Scenario, re_grid, channel: str = "los") -> SweepResult:
    """Secrecy rate of each scheme versus eavesdropper range on its ray.

    ``channel="nlos"`` averages over the scenario's seeded scatterer draws.
    """
    radii = np.asarray(re_grid, dtype=float)
    if radii.ndim != 1 or radii.size == 0:
        raise ValueError("r_E grid must be a non-empty 1-D sequence")
    cfg = scenario.system
    lo, hi = cfg.near_field
    if np.any((radii < lo) | (radii > hi)):
        raise ValueError(f"r_E grid must lie within [{lo:.4g}, {hi:.4g}] m")
    if channel not in ("los", "nlos"):
        raise ValueError(f"channel must be 'los' or 'nlos', got {channel!r}")

    def row(r_e):
        eve = PolarPosition(float(r_e), scenario.eve.angle)
        designs = scenario_designs(scenario, eve)
        if channel == "los":
            return [designs[s].rate.secrecy_rate for s in scenario.schemes]
        return [evaluate_design(designs[s], cfg, scenario.user, eve, scenario.nlos,
                                scenario.nlos_realizations).secrecy_rate for s in scenario.schemes]

    table = np.array(ordered_map(row, radii))
    meta = _metadata(scenario, channel=channel)
    if channel == "nlos":
        meta.update(nlos_paths=scenario.nlos.num_paths, realizations=scenario.nlos_realizations)
    return SweepResult("r_E", radii, scenario.schemes, table, meta)


def beam_map(config, w: np.ndarray, radii, angles) -> np.ndarray:
    """|a(p)^H w|^2 / N over a polar grid, rows are angles."""
    radii = np.asarray(radii, dtype=float)[:, None]
    offsets = element_offsets(config)[None, :]
    out = np.empty((len(angles), radii.shape[0]))
    for i, theta in enumerate(angles):
        dist = np.sqrt(radii**2 + offsets**2 - 2.0 * radii * offsets * np.sin(theta))
        rows = np.exp(-1j * config.wavenumber * dist)
        out[i] = np.abs(rows @ w) ** 2 / config.n_antennas
    return out


def power_spectrum(scenario: Scenario, which: str = "signal", radii=None, angles=None,
                   design: BeamDesign | None = None) -> SpectrumMap:
    """Normalised received power of the signal or AN beam over a polar grid.

    Defaults to 400 radii in [3, 7] m by 200 angles in [-0.02, 0.02] rad
    and the proposed design for the scenario.
    """
    if which not in ("signal", "an"):
        raise ValueError(f"which must be 'signal' or 'an', got {which!r}")
    radii = np.linspace(3.0, 7.0, 400) if radii is None else np.asarray(radii, dtype=float)
    angles = np.linspace(-0.02, 0.02, 200) if angles is None else np.asarray(angles, dtype=float)
    if radii.size < 2 or angles.size < 2:
        raise ValueError("spectrum grid must be at least 2 x 2")
    cfg = scenario.system
    if design is None:
        design = design_proposed(cfg, scenario.user, scenario.eve, scenario.search,
                                 rho_mode=scenario.correlation_mode)
    w = design.s_dir if which == "signal" else design.z_dir
    if w is None:
        raise ValueError(f"design {design.scheme!r} has no {which} beam")
    values = beam_map(cfg, w, radii, angles)
    values = values / values.max()
    meta = _metadata(scenario, which=which, scheme=design.scheme)
    return SpectrumMap(which, radii, angles, values, design, meta)
