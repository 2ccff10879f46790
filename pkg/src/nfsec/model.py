"""
Array geometry and near-field channel synthesis for a uniform linear array.

The array lies on the y-axis, centred on the origin. Positions are polar
``(radius, angle)`` pairs with the angle measured from the x-axis
(broadside). All quantities are SI: metres, hertz, watts.

Channel vectors are stored as the *row* ``h^H`` seen by a receiver, so the
complex amplitude received from a precoder ``w`` is simply ``h @ w``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(watts: float) -> float:
    return 10.0 * math.log10(watts) + 30.0


@dataclass(frozen=True)
class SystemConfig:
    """Array, carrier and power budget of the base station.

    Derived constants (wavelength, aperture, Fresnel and Rayleigh
    distances) are filled in on construction.
    """

    n_antennas: int
    carrier_freq: float
    element_spacing: float
    tx_power: float
    noise_power: float
    absorption_coeff: float = 0.0
    wavelength: float = field(init=False)
    aperture: float = field(init=False)
    fresnel_dist: float = field(init=False)
    rayleigh_dist: float = field(init=False)
    warnings: tuple = field(init=False, default=())

    def __post_init__(self):
        if int(self.n_antennas) != self.n_antennas or self.n_antennas < 2:
            raise ValueError(f"n_antennas must be an integer >= 2, got {self.n_antennas}")
        for name in ("carrier_freq", "element_spacing", "tx_power", "noise_power"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and positive, got {value}")
        if not (math.isfinite(self.absorption_coeff) and self.absorption_coeff >= 0):
            raise ValueError(f"absorption_coeff must be >= 0, got {self.absorption_coeff}")

        lam = SPEED_OF_LIGHT / self.carrier_freq
        aperture = (self.n_antennas - 1) * self.element_spacing
        set_ = object.__setattr__
        set_(self, "n_antennas", int(self.n_antennas))
        set_(self, "wavelength", lam)
        set_(self, "aperture", aperture)
        set_(self, "rayleigh_dist", 2.0 * aperture**2 / lam)
        set_(self, "fresnel_dist", 0.62 * math.sqrt(aperture**3 / lam))

        warnings = []
        if self.noise_power >= self.tx_power:
            warnings.append("noise power is not below transmit power")
        if not self.fresnel_dist < self.rayleigh_dist:
            warnings.append("aperture too small for a radiative near-field region")
        set_(self, "warnings", tuple(warnings))

    @property
    def wavenumber(self) -> float:
        return 2.0 * math.pi / self.wavelength

    @property
    def near_field(self) -> tuple[float, float]:
        """The modelled annulus ``[d_F, d_R]``."""
        return (self.fresnel_dist, self.rayleigh_dist)

    def in_near_field(self, radius: float) -> bool:
        return self.fresnel_dist <= radius <= self.rayleigh_dist


def make_config(raw: Mapping[str, float]) -> SystemConfig:
    """Build a :class:`SystemConfig` from user-facing units.

    Recognised keys: ``N``, ``f`` (Hz), exactly one of ``d`` (m) or
    ``d_over_lambda``, ``P_dbm``, ``noise_dbm`` and optionally ``K`` (1/m).
    """
    missing = [k for k in ("N", "f", "P_dbm", "noise_dbm") if k not in raw]
    if missing:
        raise ValueError(f"missing config fields: {', '.join(missing)}")
    for key, value in raw.items():
        if not math.isfinite(float(value)):
            raise ValueError(f"{key} must be finite, got {value}")

    f = float(raw["f"])
    if f <= 0:
        raise ValueError(f"carrier frequency must be positive, got {f}")
    if ("d" in raw) == ("d_over_lambda" in raw):
        raise ValueError("give exactly one of 'd' and 'd_over_lambda'")
    if "d" in raw:
        d = float(raw["d"])
    else:
        d = float(raw["d_over_lambda"]) * SPEED_OF_LIGHT / f

    n = raw["N"]
    if float(n) != int(n) or int(n) <= 0:
        raise ValueError(f"N must be a positive integer, got {n}")

    return SystemConfig(
        n_antennas=int(n),
        carrier_freq=f,
        element_spacing=d,
        tx_power=dbm_to_watts(float(raw["P_dbm"])),
        noise_power=dbm_to_watts(float(raw["noise_dbm"])),
        absorption_coeff=float(raw.get("K", 0.0)),
    )


def reference_config(**overrides) -> SystemConfig:
    """The 513-element, 300 GHz reference setup used throughout the tests."""
    raw = dict(N=513, f=300e9, d_over_lambda=0.5, P_dbm=5.0, noise_dbm=-77.0, K=0.00143)
    raw.update(overrides)
    return make_config(raw)


@dataclass(frozen=True)
class PolarPosition:
    radius: float
    angle: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise ValueError(f"radius must be positive, got {self.radius}")
        if not (-math.pi / 2 < self.angle < math.pi / 2):
            raise ValueError(f"angle must lie in (-pi/2, pi/2), got {self.angle}")

    @property
    def direction_cosine(self) -> float:
        return math.sin(self.angle)

    def cartesian(self) -> tuple[float, float]:
        return (self.radius * math.cos(self.angle), self.radius * math.sin(self.angle))


@dataclass(frozen=True)
class ChannelState:
    """Row channel ``h^H`` of one receiver with its LoS bookkeeping."""

    vector: np.ndarray
    los_coeff: complex
    array_gain: float

    def received(self, w: np.ndarray) -> complex:
        return complex(self.vector @ w)


@dataclass(frozen=True)
class NLoSConfig:
    """Simplified scatterer model: ``num_paths`` reflections, each
    ``power_offset_db`` weaker than the LoS path on average."""

    num_paths: int = 0
    power_offset_db: float = 15.0
    rng_seed: int | None = None

    def __post_init__(self):
        if self.num_paths < 0:
            raise ValueError(f"num_paths must be >= 0, got {self.num_paths}")
        if not self.power_offset_db > 0:
            raise ValueError(f"power_offset_db must be positive, got {self.power_offset_db}")

    @property
    def enabled(self) -> bool:
        return self.num_paths > 0


def element_offsets(config: SystemConfig) -> np.ndarray:
    n = np.arange(config.n_antennas)
    return (n - (config.n_antennas - 1) / 2.0) * config.element_spacing


def element_distance(pos: PolarPosition, offset):
    """Distance from ``pos`` to the element(s) at y = ``offset``."""
    r = pos.radius
    offset = np.asarray(offset, dtype=float)
    dist = np.sqrt(r * r + offset * offset - 2.0 * r * offset * math.sin(pos.angle))
    return float(dist) if dist.ndim == 0 else dist


def steering_phases(config: SystemConfig, pos: PolarPosition) -> np.ndarray:
    return -config.wavenumber * element_distance(pos, element_offsets(config))


def steering_vector(config: SystemConfig, pos: PolarPosition) -> np.ndarray:
    """Unit-modulus near-field steering vector, entry ``n`` = exp(-j k r_n)."""
    return np.exp(1j * steering_phases(config, pos))


def los_coefficient(config: SystemConfig, radius: float) -> float:
    """Free-space spreading with molecular absorption, amplitude domain."""
    return config.wavelength / (4.0 * math.pi * radius) * math.exp(-0.5 * config.absorption_coeff * radius)


def los_channel(config: SystemConfig, pos: PolarPosition) -> ChannelState:
    h_los = los_coefficient(config, pos.radius)
    return ChannelState(
        vector=h_los * steering_vector(config, pos),
        los_coeff=complex(h_los),
        array_gain=config.n_antennas * h_los * h_los,
    )


def _scatterer_bounds(config: SystemConfig) -> tuple[float, float]:
    lo = config.fresnel_dist
    hi = min(config.rayleigh_dist, 20.0)
    return lo, max(lo, hi)


def nlos_components(config: SystemConfig, pos: PolarPosition, nlos: NLoSConfig) -> np.ndarray:
    """NLoS row vectors, one per scatterer, shape ``(num_paths, N)``."""
    n = config.n_antennas
    if not nlos.enabled:
        return np.zeros((0, n), dtype=complex)
    if nlos.rng_seed is None:
        raise ValueError("rng_seed must be set when num_paths > 0")

    rng = np.random.default_rng(nlos.rng_seed)
    lo, hi = _scatterer_bounds(config)
    radii = rng.uniform(lo, hi, size=nlos.num_paths)
    angles = rng.uniform(-math.pi / 3, math.pi / 3, size=nlos.num_paths)
    variance = 10.0 ** (-nlos.power_offset_db / 10.0) * los_coefficient(config, pos.radius) ** 2
    gains = math.sqrt(variance / 2.0) * (rng.standard_normal(nlos.num_paths)
                                         + 1j * rng.standard_normal(nlos.num_paths))
    return np.stack([g * steering_vector(config, PolarPosition(r, a))
                     for g, r, a in zip(gains, radii, angles)])


def full_channel(config: SystemConfig, pos: PolarPosition, nlos: NLoSConfig) -> ChannelState:
    """LoS channel plus ``nlos.num_paths`` seeded scatterer paths."""
    los = los_channel(config, pos)
    if not nlos.enabled:
        return los
    vector = los.vector + nlos_components(config, pos, nlos).sum(axis=0)
    return ChannelState(vector=vector, los_coeff=los.los_coeff, array_gain=los.array_gain)
