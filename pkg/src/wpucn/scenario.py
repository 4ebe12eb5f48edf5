"""Scenario configuration, physical constants and deployment geometry.

The frame used throughout the package puts the centre of the monitoring disk at
the origin. The HAP sits at ``(-d_fly, 0, h_hap)`` and the UAV hovers at
``(0, 0, h_uav)`` during the WET and WIT phases. UDs are buried at
``(x, y, -burial_depth_du)``.
"""
from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

__all__ = [
    "ConfigError",
    "PhysicalConstants",
    "Scenario",
    "UdGeometry",
    "CONSTANTS",
    "load_scenario",
    "dump_scenario",
    "sample_ud_positions",
    "compute_geometry",
    "db_to_linear",
    "linear_to_db",
]


class ConfigError(ValueError):
    """Raised for malformed or invalid scenario documents."""


def db_to_linear(value_db):
    return 10.0 ** (np.asarray(value_db, dtype=float) / 10.0)


def linear_to_db(value):
    return 10.0 * np.log10(value)


@dataclass(frozen=True)
class PhysicalConstants:
    c: float = 299_792_458.0
    mu_0: float = 1.25663706212e-6
    eps_0: float = 8.8541878128e-12
    mu_r: float = 1.0


CONSTANTS = PhysicalConstants()


# Keys whose values must lie in [0, 1].
_FRACTIONS = ("vwc_mv", "clay_mc", "energy_conv_zeta", "wit_portion_phi", "amp_eff_eta")
# Keys whose values must be strictly positive.
_POSITIVE = (
    "num_uds_N", "burial_depth_du", "carrier_f", "bandwidth_W", "h_hap", "h_uav",
    "d_fly", "pathloss_exp_p2u", "pathloss_exp_v2u", "num_antennas_Q", "p_circuit",
    "p_rf_chain", "motor_t0", "motor_tf", "motor_voltage", "motor_current",
    "uav_speed", "uav_accel", "blade_power_P0", "induced_power_Pi", "tip_speed",
    "induced_velocity", "drag_ratio", "air_density", "rotor_solidity", "rotor_area",
    "throughput_gamma", "charging_time_tp1", "fading_draws", "mu_r",
)
_INTEGERS = ("num_uds_N", "num_antennas_Q", "fading_draws")


@dataclass(frozen=True)
class Scenario:
    """Complete simulation configuration.

    Defaults reproduce the farm scenario of the reference study. Powers are in
    dBW, antenna gains in dBi, the EH threshold in dBm; everything else is SI.
    ``radius_R`` may be zero (all UDs at the centre), every other length is
    strictly positive.
    """

    # deployment
    radius_R: float = 5.0
    num_uds_N: int = 64
    burial_depth_du: float = 0.4
    vwc_mv: float = 0.15
    clay_mc: float = 0.38
    # radio
    carrier_f: float = 433e6
    bandwidth_W: float = 125e3
    p_hap_dbw: float = 35.56
    p_uav_dbw: float = 10.0
    gain_hap: float = 15.0
    gain_uav: float = 5.0
    gain_ud: float = 2.15
    h_hap: float = 4.5
    h_uav: float = 5.5
    d_fly: float = 600.0
    pathloss_exp_p2u: float = 2.4
    pathloss_exp_v2u: float = 2.0
    rician_p2u: float = 3.0
    rician_v2u: float = 10.0
    num_antennas_Q: int = 32
    noise_var_dbw: float = -147.0
    eh_threshold_psi: float = -22.0
    # WET configuration
    energy_conv_zeta: float = 0.6
    wit_portion_phi: float = 0.6
    amp_eff_eta: float = 0.38
    p_circuit: float = 0.1
    p_rf_chain: float = 0.06
    motor_t0: float = 1.0e-3         # servo pulse 1-2 ms spans the half-turn
    motor_tf: float = 20e-3
    motor_voltage: float = 5.0
    motor_current: float = 0.25
    # UAV propulsion
    uav_speed: float = 10.0
    uav_accel: float = 1.0
    blade_power_P0: float = 14.7517
    induced_power_Pi: float = 41.5409
    tip_speed: float = 80.0
    induced_velocity: float = 5.0463
    drag_ratio: float = 0.5009
    air_density: float = 1.225
    rotor_solidity: float = 0.1248
    rotor_area: float = 0.1256
    # mission
    throughput_gamma: float = 12.5e6
    charging_time_tp1: float = 120.0
    fading_draws: int = 200
    # soil overrides: both None -> mineralogy-based model
    soil_eps_real: float | None = None
    soil_eps_imag: float | None = None
    mu_r: float = 1.0

    def __post_init__(self):
        for key in _INTEGERS:
            value = getattr(self, key)
            if isinstance(value, bool) or not float(value).is_integer():
                raise ConfigError(f"{key} must be an integer, got {value!r}")
            object.__setattr__(self, key, int(value))
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if value is None:
                continue
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ConfigError(f"{f.name} must be numeric, got {value!r}")
            if not math.isfinite(value):
                raise ConfigError(f"{f.name} must be finite")
        for key in _FRACTIONS:
            if not 0.0 <= getattr(self, key) <= 1.0:
                raise ConfigError(f"{key} must lie in [0, 1]")
        for key in _POSITIVE:
            if not getattr(self, key) > 0:
                raise ConfigError(f"{key} must be strictly positive")
        if self.radius_R < 0:
            raise ConfigError("radius_R must be non-negative")
        if not self.h_uav > self.h_hap:
            raise ConfigError("h_uav must exceed h_hap")
        if self.uav_speed > self.tip_speed:
            raise ConfigError("uav_speed must not exceed tip_speed")
        if (self.soil_eps_real is None) != (self.soil_eps_imag is None):
            raise ConfigError("soil_eps_real and soil_eps_imag must be given together")

    # linear views -------------------------------------------------------
    @property
    def p_hap(self) -> float:
        return float(db_to_linear(self.p_hap_dbw))

    @property
    def p_uav(self) -> float:
        return float(db_to_linear(self.p_uav_dbw))

    @property
    def noise_var(self) -> float:
        return float(db_to_linear(self.noise_var_dbw))

    @property
    def eh_threshold(self) -> float:
        """EH sensitivity in watts."""
        return float(db_to_linear(self.eh_threshold_psi - 30.0))

    @property
    def constants(self) -> PhysicalConstants:
        return dataclasses.replace(CONSTANTS, mu_r=self.mu_r)

    def replace(self, **changes) -> "Scenario":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)


_FIELD_NAMES = frozenset(f.name for f in dataclasses.fields(Scenario))


def load_scenario(config_text: str) -> Scenario:
    """Parse a flat JSON object into a :class:`Scenario`.

    Absent keys take their defaults and unknown keys are rejected. An empty or
    whitespace-only document yields the default scenario.
    """
    if not config_text.strip():
        return Scenario()
    try:
        doc = json.loads(config_text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed scenario document: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("scenario document must be a flat key-value object")
    unknown = sorted(set(doc) - _FIELD_NAMES)
    if unknown:
        raise ConfigError(f"unknown scenario key(s): {', '.join(unknown)}")
    return Scenario(**doc)


def dump_scenario(scenario: Scenario) -> str:
    return json.dumps(scenario.to_dict(), indent=2, sort_keys=True)


def sample_ud_positions(scenario: Scenario, seed: int | np.random.Generator) -> np.ndarray:
    """Draw ``N`` UD positions uniformly over the monitoring disk.

    Returns an ``(N, 3)`` array of ``(x, y, z)`` with ``z = -burial_depth_du``.
    The same integer seed always gives the same array.
    """
    rng = np.random.default_rng(seed)
    n = scenario.num_uds_N
    # inverse-CDF sampling of the radius keeps the density uniform in area
    r = scenario.radius_R * np.sqrt(rng.random(n))
    phi = 2.0 * np.pi * rng.random(n)
    x = r * np.cos(phi)
    y = r * np.sin(phi)
    # guard against rounding pushing a point just outside the disk
    rr = np.hypot(x, y)
    over = rr > scenario.radius_R
    if np.any(over):
        shrink = (scenario.radius_R / rr[over]) * (1.0 - 4e-16)
        x[over] *= shrink
        y[over] *= shrink
    z = np.full(n, -scenario.burial_depth_du)
    return np.column_stack([x, y, z])


@dataclass(frozen=True)
class UdGeometry:
    """Link geometry of one or several UDs (array-valued fields broadcast).

    Azimuths are measured in the horizontal plane from the broadside of the
    transmitting ULA. The HAP broadside is perpendicular to the HAP-to-centre
    line, so the monitoring area lies near the array endfire. The UAV broadside
    points along +x.
    """

    position: np.ndarray
    air_len_p2u: Any
    air_len_v2u: Any
    soil_len: Any
    azimuth_p2u: Any
    azimuth_v2u: Any


def compute_geometry(scenario: Scenario, position) -> UdGeometry:
    """Air/soil path lengths and azimuths for one position or an ``(N, 3)`` array."""
    pos = np.asarray(position, dtype=float)
    x = pos[..., 0]
    y = pos[..., 1]
    air_v2u = np.sqrt(x**2 + y**2 + scenario.h_uav**2)
    dx = x + scenario.d_fly
    air_p2u = np.sqrt(dx**2 + y**2 + scenario.h_hap**2)
    azimuth_p2u = np.arctan2(y, dx) - np.pi / 2.0
    azimuth_v2u = np.arctan2(y, x)
    soil_len = np.full_like(x, scenario.burial_depth_du)
    if pos.ndim == 1:
        air_v2u, air_p2u, azimuth_p2u, azimuth_v2u, soil_len = (
            float(v) for v in (air_v2u, air_p2u, azimuth_p2u, azimuth_v2u, soil_len)
        )
    return UdGeometry(
        position=pos,
        air_len_p2u=air_p2u,
        air_len_v2u=air_v2u,
        soil_len=soil_len,
        azimuth_p2u=azimuth_p2u,
        azimuth_v2u=azimuth_v2u,
    )
