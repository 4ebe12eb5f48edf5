"""Rotary-wing propulsion power and mission energy of the UAV.

Propulsion power at forward speed ``V`` is the usual three-term model:

    P(V) = P0 (1 + 3 V^2 / U_tip^2)
         + Pi sqrt(sqrt(1 + V^4 / (4 v0^4)) - V^2 / (2 v0^2))
         + 0.5 d0 rho s A V^3

Each flight leg is a straight accelerate, cruise, decelerate profile.
Deceleration costs the same energy as acceleration.
"""
from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np
from scipy.integrate import quad

from .scenario import Scenario

__all__ = [
    "UavPhysics",
    "EnergyBreakdown",
    "GeometryError",
    "propulsion_power",
    "hover_energy",
    "accel_energy",
    "round_trip_leg",
    "total_uav_energy",
]


class GeometryError(ValueError):
    """The flight distance is too short to reach cruise speed and stop again."""


@dataclass(frozen=True)
class UavPhysics:
    """Airframe constants plus the cruise speed ``V`` and acceleration ``a``."""

    P_0: float = 14.7517
    P_i: float = 41.5409
    U_tip: float = 80.0
    v_0: float = 5.0463
    d_0: float = 0.5009
    rho: float = 1.225
    S: float = 0.1248
    A: float = 0.1256
    V: float = 10.0
    a: float = 1.0

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{f.name} must be positive and finite, got {value}")
        if self.V > self.U_tip:
            raise ValueError(f"cruise speed {self.V} exceeds the blade tip speed {self.U_tip}")

    @classmethod
    def from_scenario(cls, sc: Scenario) -> "UavPhysics":
        return cls(
            P_0=sc.blade_power_P0,
            P_i=sc.induced_power_Pi,
            U_tip=sc.tip_speed,
            v_0=sc.induced_velocity,
            d_0=sc.drag_ratio,
            rho=sc.air_density,
            S=sc.rotor_solidity,
            A=sc.rotor_area,
            V=sc.uav_speed,
            a=sc.uav_accel,
        )

    @property
    def hover_power(self) -> float:
        return self.P_0 + self.P_i


@dataclass(frozen=True)
class EnergyBreakdown:
    """Mission energy split by activity, in joules.

    ``E_ft`` and ``E_fb`` are the outbound and return flights. ``total`` is the
    plain sum of the other fields.
    """

    E_wet: float
    E_dl: float
    E_h_p2: float
    E_h_p3: float
    E_h_p4: float
    E_ft: float
    E_fb: float

    @property
    def total(self) -> float:
        return (self.E_wet + self.E_dl + self.E_h_p2 + self.E_h_p3 + self.E_h_p4
                + self.E_ft + self.E_fb)

    def as_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d["E_s"] = self.total
        return d


def propulsion_power(physics: UavPhysics, V):
    """Propulsion power in watts at forward speed ``V`` (scalar or array)."""
    V = np.asarray(V, dtype=float)
    if np.any(V < 0):
        raise ValueError("speed must be non-negative")
    ph = physics
    blade = ph.P_0 * (1.0 + 3.0 * V**2 / ph.U_tip**2)
    r = V**2 / (2.0 * ph.v_0**2)
    # sqrt(1 + r^2) - r rewritten as 1 / (sqrt(1 + r^2) + r) to avoid cancellation
    induced = ph.P_i * np.sqrt(1.0 / (np.sqrt(1.0 + r**2) + r))
    parasite = 0.5 * ph.d_0 * ph.rho * ph.S * ph.A * V**3
    out = blade + induced + parasite
    return float(out) if out.ndim == 0 else out


def hover_energy(physics: UavPhysics, t: float) -> float:
    if t < 0:
        raise ValueError("hover time must be non-negative")
    return physics.hover_power * t


def accel_energy(physics: UavPhysics, epsabs: float = 1e-6) -> float:
    """Energy to accelerate from rest to ``V`` at constant ``a``.

    Integrates ``P(a t)`` over ``t`` in ``[0, V/a]`` by adaptive quadrature.
    """
    T = physics.V / physics.a
    value, _ = quad(lambda t: propulsion_power(physics, physics.a * t), 0.0, T,
                    epsabs=epsabs, epsrel=1e-12, limit=200)
    return float(value)


def round_trip_leg(physics: UavPhysics, D_fly: float) -> tuple[float, float, float]:
    """Energy and timing of one straight leg of length ``D_fly``.

    Returns ``(E_leg, T_fly, T_fly_V)``, where ``T_fly_V`` is the time spent at
    cruise speed.
    """
    V, a = physics.V, physics.a
    if D_fly < V**2 / a * (1.0 - 1e-12):
        raise GeometryError(
            f"D_fly={D_fly} m is shorter than V^2/a={V**2 / a} m needed to speed up and stop"
        )
    T_fly = D_fly / V + V / a
    T_fly_V = max(D_fly / V - V / a, 0.0)
    E_acc = accel_energy(physics)
    E_leg = 2.0 * E_acc + propulsion_power(physics, V) * T_fly_V
    return E_leg, T_fly, T_fly_V


def total_uav_energy(physics: UavPhysics, P_uav: float, T_p2: float, T_p3: float,
                     T_p4: float, D_fly: float) -> EnergyBreakdown:
    """Energy from take-off to landing, excluding the charging phase.

    ``P_uav`` is the UAV's radio power budget, drawn while charging UDs
    (``T_p2``) and while offloading to the HAP (``T_p4``). The UAV hovers
    through phases 2 to 4 and flies out and back once.
    """
    for name, t in (("T_p2", T_p2), ("T_p3", T_p3), ("T_p4", T_p4)):
        if t < 0:
            raise ValueError(f"{name} must be non-negative")
    E_leg = round_trip_leg(physics, D_fly)[0] if D_fly > 0 else 0.0
    return EnergyBreakdown(
        E_wet=P_uav * T_p2,
        E_dl=P_uav * T_p4,
        E_h_p2=hover_energy(physics, T_p2),
        E_h_p3=hover_energy(physics, T_p3),
        E_h_p4=hover_energy(physics, T_p4),
        E_ft=E_leg,
        E_fb=E_leg,
    )
