"""Time allocation for charging, uplink TDMA and offloading.

Every UD ``n`` must deliver ``gamma_n`` bits in its TDMA slot ``tau_n``. Its
energy comes from the UD charging phase ``T_p2`` and, when the HAP takes part,
from the UAV's outbound flight. The SNR it can afford in its slot is linear in
``T_p2``:

    snr_n * tau_n = C_n * T_p2 + b_n

The program minimizes ``T_p2 + sum(tau_n)`` subject to every throughput
constraint. For fixed ``T_p2`` the optimal slots make each constraint active,
which leaves a convex one-dimensional problem in ``T_p2``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .deployment import Deployment
from .link import offload_time, uav_receive_power
from .scenario import Scenario, db_to_linear
from .uav_energy import EnergyBreakdown, UavPhysics, propulsion_power, total_uav_energy
from .wet import Scheme

__all__ = [
    "ApproachKind",
    "WetApproach",
    "LinkCoefficients",
    "TimeAllocationPlan",
    "InfeasibleEnergyError",
    "link_coefficients",
    "required_tau",
    "slot_length_function",
    "solve_time_allocation",
    "min_charging_time",
    "flight_time",
    "plan",
    "TIME_FLOOR",
]

LN2 = np.log(2.0)
TIME_FLOOR = 1e-9


class InfeasibleEnergyError(ValueError):
    """Harvested energy cannot support the throughput target with any finite slot."""


class ApproachKind(str, enum.Enum):
    TRADITIONAL_PS = "ps"
    UAV_WET = "uav"
    HYBRID = "hybrid"

    @classmethod
    def parse(cls, name) -> "ApproachKind":
        if isinstance(name, cls):
            return name
        key = str(name).lower()
        aliases = {"traditional_ps": "ps", "hap": "ps", "uav_wet": "uav"}
        return cls(aliases.get(key, key))


@dataclass(frozen=True)
class WetApproach:
    """Which power sources charge the UDs and with which schemes."""

    kind: ApproachKind = ApproachKind.HYBRID
    hap_scheme: Scheme = Scheme.AASS_II
    uav_scheme: Scheme = Scheme.RAB

    def __post_init__(self):
        object.__setattr__(self, "kind", ApproachKind.parse(self.kind))
        object.__setattr__(self, "hap_scheme", Scheme.parse(self.hap_scheme))
        object.__setattr__(self, "uav_scheme", Scheme.parse(self.uav_scheme))

    @property
    def uses_hap(self) -> bool:
        return self.kind is not ApproachKind.UAV_WET

    @property
    def uses_uav(self) -> bool:
        return self.kind is not ApproachKind.TRADITIONAL_PS

    def sources(self) -> list[tuple[str, Scheme]]:
        out = []
        if self.uses_hap:
            out.append(("hap", self.hap_scheme))
        if self.uses_uav:
            out.append(("uav", self.uav_scheme))
        return out

    @property
    def label(self) -> str:
        parts = [f"{ps}={scheme.value}" for ps, scheme in self.sources()]
        return f"{self.kind.value}({', '.join(parts)})"


@dataclass(frozen=True)
class LinkCoefficients:
    C: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        C = np.atleast_1d(np.asarray(self.C, dtype=float))
        b = np.broadcast_to(np.asarray(self.b, dtype=float), C.shape).copy()
        if np.any(~np.isfinite(C)) or np.any(C <= 0):
            raise ValueError("C_n must be positive and finite")
        if np.any(b < 0):
            raise ValueError("b_n must be non-negative")
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "b", b)


def flight_time(scenario: Scenario) -> float:
    return scenario.d_fly / scenario.uav_speed + scenario.uav_speed / scenario.uav_accel


def link_coefficients(approach: WetApproach, scenario: Scenario, uplink_loss, xi_hap=None,
                      xi_uav=None, T_fly: float | None = None) -> LinkCoefficients:
    """SNR-accrual coefficients ``C_n`` (per second of charging) and offsets ``b_n``.

    ``xi_hap``/``xi_uav`` are fading-averaged incident powers in watts. Each
    source's power is lifted to the EH input by its antenna gain and the UD
    gain before conversion; the HAP also charges during the outbound flight.
    """
    sc = scenario
    if T_fly is None:
        T_fly = flight_time(sc)
    unit = (sc.wit_portion_phi * sc.energy_conv_zeta * db_to_linear(sc.gain_ud)
            * db_to_linear(sc.gain_uav) / (np.asarray(uplink_loss, dtype=float) * sc.noise_var))
    g_ud = db_to_linear(sc.gain_ud)
    rate = np.zeros_like(unit)
    offset = np.zeros_like(unit)
    if approach.uses_hap:
        if xi_hap is None:
            raise ValueError(f"{approach.label} needs HAP incident powers")
        hap = db_to_linear(sc.gain_hap) * g_ud * np.asarray(xi_hap, dtype=float)
        rate = rate + hap
        offset = offset + T_fly * hap
    if approach.uses_uav:
        if xi_uav is None:
            raise ValueError(f"{approach.label} needs UAV incident powers")
        rate = rate + db_to_linear(sc.gain_uav) * g_ud * np.asarray(xi_uav, dtype=float)
    return LinkCoefficients(unit * rate, unit * offset)


def slot_length_function(tau, gamma: float, W: float):
    """``u(tau) = tau * (2**(gamma / (tau W)) - 1)``: SNR-seconds needed in a slot ``tau``."""
    tau = np.asarray(tau, dtype=float)
    return tau * np.expm1(LN2 * gamma / (tau * W))


def _log_ratio(x: float) -> float:
    # log(expm1(x) / x), accurate for small and large x
    if x < 1.0:
        return float(np.log(np.expm1(x) / x))
    return float(x + np.log(-np.expm1(-x)) - np.log(x))


def required_tau(C: float, b: float, T_p2: float, gamma: float, W: float) -> float:
    """Shortest slot in which a UD with budget ``C T_p2 + b`` meets ``gamma`` bits."""
    rhs = C * T_p2 + b
    floor = gamma * LN2 / W
    if not rhs > floor:
        raise InfeasibleEnergyError(
            f"energy budget {rhs:.6g} does not exceed the infimum {floor:.6g}; increase T_p2"
        )
    # substitute x = gamma ln2 / (tau W): u = floor * expm1(x) / x
    target = np.log(rhs / floor)
    lo = target                                  # expm1(x)/x <= e^x
    hi = max(2.0 * np.expm1(target), lo)         # expm1(x)/x >= 1 + x/2
    if _log_ratio(lo) > target:
        lo = target / 2.0
    x = brentq(lambda z: _log_ratio(z) - target, lo, hi, xtol=1e-300, rtol=1e-14, maxiter=500)
    return float(floor / x)


def _objective(T_p2: float, coeffs: LinkCoefficients, gamma, W: float) -> tuple[float, np.ndarray]:
    taus = np.array([required_tau(c, bb, T_p2, g, W) for c, bb, g in zip(coeffs.C, coeffs.b, gamma)])
    return T_p2 + taus.sum(), taus


def solve_time_allocation(coeffs: LinkCoefficients, gamma, W: float, xatol: float = 1e-8
                          ) -> tuple[float, np.ndarray]:
    """Optimal ``(T_p2, tau)`` for the charge-then-transmit program.

    ``gamma`` is a scalar or per-UD array of bits.
    """
    gamma = np.broadcast_to(np.asarray(gamma, dtype=float), coeffs.C.shape)
    if np.any(gamma <= 0):
        raise ValueError("throughput targets must be positive")
    need = (gamma * LN2 / W - coeffs.b) / coeffs.C
    T_min = max(float(need.max()), 0.0)
    lo = T_min * (1.0 + 1e-9) + TIME_FLOOR

    def h(t):
        return _objective(t, coeffs, gamma, W)[0]

    # double the upper end until the convex objective turns upward
    hi = max(2.0 * lo, 1.0)
    h_hi = h(hi)
    while True:
        h_next = h(2.0 * hi)
        if h_next > h_hi:
            break
        hi, h_hi = 2.0 * hi, h_next
        if hi > 1e12:
            raise InfeasibleEnergyError("objective keeps decreasing; coefficients are degenerate")
    res = minimize_scalar(h, bounds=(lo, 2.0 * hi), method="bounded",
                          options={"xatol": xatol, "maxiter": 2000})
    T_p2 = float(res.x)
    # the bounded search never evaluates the end point itself
    if h(lo) <= res.fun:
        T_p2 = lo
    return T_p2, _objective(T_p2, coeffs, gamma, W)[1]


def min_charging_time(E_s: float, scenario: Scenario) -> float:
    """Phase-1 charging time that refills ``E_s`` joules.

    The hover power is added to the received power in the denominator.
    """
    if E_s < 0:
        raise ValueError("energy must be non-negative")
    physics = UavPhysics.from_scenario(scenario)
    return E_s / (uav_receive_power(scenario) + propulsion_power(physics, 0.0))


@dataclass
class TimeAllocationPlan:
    approach: WetApproach
    T_p1: float
    T_p2: float
    tau: np.ndarray
    T_p3: float
    T_p4: float
    energy: EnergyBreakdown
    coefficients: LinkCoefficients
    gamma: np.ndarray
    throughput: np.ndarray
    feasible: bool
    kkt_residual: float
    extras: dict = field(default_factory=dict)

    @property
    def T_total(self) -> float:
        return self.T_p1 + self.T_p2 + self.T_p3 + self.T_p4

    @property
    def E_s(self) -> float:
        return self.energy.total

    def summary(self) -> dict:
        return {
            "approach": self.approach.label,
            "T_p1": self.T_p1,
            "T_p2": self.T_p2,
            "T_p3": self.T_p3,
            "T_p4": self.T_p4,
            "T_total": self.T_total,
            "E_s": self.E_s,
            "feasible": self.feasible,
            "kkt_residual": self.kkt_residual,
        }


def plan(scenario: Scenario, approach: WetApproach, seed: int = 0, draws: int | None = None,
         gamma=None, deployment: Deployment | None = None) -> TimeAllocationPlan:
    """Sample a deployment, solve the time allocation and cost the mission.

    Passing the same ``deployment`` to several calls evaluates the approaches
    on identical placements and fading draws.
    """
    sc = scenario
    dep = deployment or Deployment(sc, seed)
    draws = draws or sc.fading_draws
    gamma = np.broadcast_to(np.asarray(sc.throughput_gamma if gamma is None else gamma,
                                       dtype=float), (dep.N,)).copy()
    xi = {ps: dep.expected_incident(ps, scheme, draws) for ps, scheme in approach.sources()}
    coeffs = link_coefficients(approach, sc, dep.uplink_loss, xi.get("hap"), xi.get("uav"))
    W = sc.bandwidth_W
    T_p2, tau = solve_time_allocation(coeffs, gamma, W)
    snr_budget = coeffs.C * T_p2 + coeffs.b
    throughput = tau * W * np.log1p(snr_budget / tau) / LN2
    residual = float(np.max(np.abs(throughput - gamma)))
    T_p3 = float(tau.sum())
    T_p4 = offload_time(float(throughput.sum()), sc)
    physics = UavPhysics.from_scenario(sc)
    energy = total_uav_energy(physics, sc.p_uav, T_p2, T_p3, T_p4, sc.d_fly)
    T_p1 = min_charging_time(energy.total, sc)
    feasible = bool(T_p2 > 0 and np.all(tau > 0) and residual <= 1e-6 * gamma.max())
    return TimeAllocationPlan(approach, T_p1, T_p2, tau, T_p3, T_p4, energy, coeffs, gamma,
                              throughput, feasible, residual, {"draws": draws, "seed": seed})
