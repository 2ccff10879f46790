"""
Scenario files: flat ``key = value`` text with units in the key names.

Blank lines and ``#`` comments are ignored. Every key is optional except
the geometry of the two receivers; unknown keys are rejected. A bundled
scenario can be referenced by its stem (``range_sweep``) instead of a path.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .baselines import OracleGrids, SchemeId
from .design import SearchSettings
from .model import NLoSConfig, PolarPosition, SystemConfig, make_config


class ScenarioParseError(ValueError):
    def __init__(self, path, line: int, column: int, message: str):
        super().__init__(f"{path}:{line}:{column}: {message}")
        self.line = line
        self.column = column


class ScenarioValidationError(ValueError):
    def __init__(self, field_name: str, reason: str):
        super().__init__(f"{field_name}: {reason}")
        self.field = field_name


def _int(text):
    value = float(text)
    if value != int(value):
        raise ValueError(f"expected an integer, got {text}")
    return int(value)


def _schemes(text):
    return tuple(SchemeId.parse(s) for s in text.split(",") if s.strip())


def _grids(text):
    parts = [_int(p) for p in text.split(",")]
    if len(parts) != 3:
        raise ValueError("expected three comma-separated sizes")
    return tuple(parts)


# key -> (parser, default); None default means required
KEYS = {
    "n_antennas": (_int, 513),
    "carrier_freq_hz": (float, 300e9),
    "d_over_lambda": (float, None),
    "element_spacing_m": (float, None),
    "tx_power_dbm": (float, 5.0),
    "noise_power_dbm": (float, -77.0),
    "absorption_per_m": (float, 0.00143),
    "user_radius_m": (float, None),
    "user_angle_rad": (float, 0.0),
    "eve_radius_m": (float, None),
    "eve_angle_rad": (float, 0.0),
    "nlos_paths": (_int, 0),
    "nlos_offset_db": (float, 15.0),
    "nlos_realizations": (_int, 500),
    "seed": (_int, 0),
    "search_grid_points": (_int, 2048),
    "search_tolerance_m": (float, 1e-4),
    "search_objective": (str, "approx"),
    "correlation_mode": (str, "exact"),
    "nullspace_alpha_steps": (_int, 1001),
    "oracle_grid": (_grids, (64, 64, 64)),
    "schemes": (_schemes, tuple(SchemeId)),
}
REQUIRED = ("user_radius_m", "eve_radius_m")


@dataclass(frozen=True)
class Scenario:
    system: SystemConfig
    user: PolarPosition
    eve: PolarPosition
    nlos: NLoSConfig
    search: SearchSettings
    schemes: tuple
    nlos_realizations: int = 500
    seed: int = 0
    correlation_mode: str = "exact"
    oracle_grids: OracleGrids = field(default_factory=OracleGrids)
    nullspace_alpha_steps: int = 1001
    values: tuple = ()

    @property
    def digest(self) -> str:
        """Stable short hash of the parsed key/value set."""
        canon = "\n".join(f"{k}={v!r}" for k, v in self.values)
        return hashlib.sha256(canon.encode()).hexdigest()[:16]

    def design_kwargs(self) -> dict:
        return dict(settings=self.search, rho_mode=self.correlation_mode,
                    oracle_grids=self.oracle_grids, alpha_grid_steps=self.nullspace_alpha_steps)

    def with_eve(self, eve: PolarPosition) -> "Scenario":
        from dataclasses import replace
        return replace(self, eve=eve)


def parse_scenario_text(text: str, source="<string>") -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        col = len(line) - len(line.lstrip()) + 1
        if "=" not in line:
            raise ScenarioParseError(source, lineno, col, "expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        eq = line.index("=")
        value_col = eq + 2 + len(line[eq + 1:]) - len(line[eq + 1:].lstrip())
        if key not in KEYS:
            raise ScenarioParseError(source, lineno, col, f"unknown key {key!r}")
        if key in values:
            raise ScenarioParseError(source, lineno, col, f"duplicate key {key!r}")
        if not value:
            raise ScenarioParseError(source, lineno, value_col, f"missing value for {key!r}")
        try:
            values[key] = KEYS[key][0](value)
        except ValueError as exc:
            raise ScenarioParseError(source, lineno, value_col, f"bad value for {key!r}: {exc}")
    if not values:
        raise ScenarioParseError(source, 1, 1, "empty scenario")
    return values


def build_scenario(values: dict) -> Scenario:
    for key in REQUIRED:
        if key not in values:
            raise ScenarioValidationError(key, "required")
    full = {k: values.get(k, default) for k, (_, default) in KEYS.items()}

    raw = dict(N=full["n_antennas"], f=full["carrier_freq_hz"], P_dbm=full["tx_power_dbm"],
               noise_dbm=full["noise_power_dbm"], K=full["absorption_per_m"])
    if full["element_spacing_m"] is not None and full["d_over_lambda"] is not None:
        raise ScenarioValidationError("element_spacing_m", "give either element_spacing_m or d_over_lambda")
    if full["element_spacing_m"] is not None:
        raw["d"] = full["element_spacing_m"]
    else:
        raw["d_over_lambda"] = full["d_over_lambda"] if full["d_over_lambda"] is not None else 0.5
    try:
        system = make_config(raw)
    except ValueError as exc:
        raise ScenarioValidationError("system", str(exc)) from None

    positions = {}
    for who in ("user", "eve"):
        try:
            pos = PolarPosition(full[f"{who}_radius_m"], full[f"{who}_angle_rad"])
        except ValueError as exc:
            raise ScenarioValidationError(f"{who}_radius_m", str(exc)) from None
        if pos.radius < system.fresnel_dist:
            raise ScenarioValidationError(
                f"{who}_radius_m", f"{pos.radius} m is inside the Fresnel distance {system.fresnel_dist:.4g} m")
        if pos.radius > system.rayleigh_dist:
            raise ScenarioValidationError(
                f"{who}_radius_m", f"{pos.radius} m is beyond the Rayleigh distance {system.rayleigh_dist:.4g} m")
        positions[who] = pos

    for key, allowed in (("correlation_mode", ("exact", "approx")), ("search_objective", ("exact", "approx"))):
        if full[key] not in allowed:
            raise ScenarioValidationError(key, f"must be one of {allowed}")
    if full["nlos_realizations"] < 1:
        raise ScenarioValidationError("nlos_realizations", "must be >= 1")
    if not full["schemes"]:
        raise ScenarioValidationError("schemes", "at least one scheme is required")

    try:
        nlos = NLoSConfig(full["nlos_paths"], full["nlos_offset_db"], full["seed"])
        search = SearchSettings(full["search_grid_points"], full["search_tolerance_m"],
                                objective=full["search_objective"])
        grids = OracleGrids(*full["oracle_grid"])
    except ValueError as exc:
        raise ScenarioValidationError("scenario", str(exc)) from None

    canon = tuple(sorted((k, tuple(s.value for s in v) if k == "schemes" else v) for k, v in full.items()))
    return Scenario(
        system=system, user=positions["user"], eve=positions["eve"], nlos=nlos, search=search,
        schemes=tuple(full["schemes"]), nlos_realizations=full["nlos_realizations"],
        seed=full["seed"], correlation_mode=full["correlation_mode"], oracle_grids=grids,
        nullspace_alpha_steps=full["nullspace_alpha_steps"], values=canon,
    )


def bundled_scenarios() -> list[str]:
    root = resources.files("nfsec") / "scenarios"
    return sorted(p.name[:-len(".scenario")] for p in root.iterdir() if p.name.endswith(".scenario"))


def resolve_scenario_path(name_or_path) -> Path:
    path = Path(name_or_path)
    if path.exists():
        return path
    bundled = resources.files("nfsec") / "scenarios" / f"{path.stem}.scenario"
    if path.suffix in ("", ".scenario") and bundled.is_file():
        return Path(str(bundled))
    raise FileNotFoundError(f"scenario not found: {name_or_path}")


def load_scenario(path) -> Scenario:
    path = resolve_scenario_path(path)
    text = path.read_text()
    return build_scenario(parse_scenario_text(text, source=path))
