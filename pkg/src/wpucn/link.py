"""HAP-UAV link budget and UD uplink throughput.

The HAP-UAV hop is a vertical LOS link with unit small-scale gain. It powers
the UAV in phase 1 and carries the offloaded sensor data in phase 4.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scenario import Scenario, db_to_linear

__all__ = ["LinkBudget", "uav_receive_power", "ud_throughput", "offload_time"]


@dataclass(frozen=True)
class LinkBudget:
    hap_uav_gain_product: float
    fspl_hap_uav: float
    noise_var: float
    h_0: float = 1.0

    def __post_init__(self):
        for name in ("hap_uav_gain_product", "fspl_hap_uav", "noise_var"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.h_0 != 1.0:
            raise ValueError("the HAP-UAV small-scale gain is fixed at 1")

    @classmethod
    def from_scenario(cls, sc: Scenario) -> "LinkBudget":
        sep = sc.h_uav - sc.h_hap
        if not sep > 0:
            raise ValueError("the UAV must hover above the HAP")
        fspl = (4.0 * np.pi * sc.carrier_f * sep / sc.constants.c) ** 2
        gains = db_to_linear(sc.gain_hap) * db_to_linear(sc.gain_uav)
        return cls(float(gains), float(fspl), sc.noise_var)

    def snr(self, power: float) -> float:
        return power * self.h_0 * self.hap_uav_gain_product / (self.fspl_hap_uav * self.noise_var)


def uav_receive_power(scenario: Scenario) -> float:
    """DC power the UAV collects from the HAP while charging, in watts."""
    lb = LinkBudget.from_scenario(scenario)
    return scenario.energy_conv_zeta * scenario.p_hap * lb.hap_uav_gain_product * lb.h_0 / lb.fspl_hap_uav


def ud_throughput(tau_n, E_n, uplink_loss, G_ud: float, G_uav: float, phi: float, W: float,
                  noise_var: float):
    """Bits a UD delivers in its slot ``tau_n`` when spending ``phi * E_n`` on it.

    ``G_ud`` and ``G_uav`` are linear antenna gains; ``uplink_loss`` is the
    linear UD-to-UAV path loss.
    """
    tau_n = np.asarray(tau_n, dtype=float)
    E_n = np.asarray(E_n, dtype=float)
    if np.any(tau_n <= 0):
        raise ValueError("slot length must be positive")
    if np.any(E_n < 0):
        raise ValueError("energy must be non-negative")
    snr = phi * E_n * G_ud * G_uav / (tau_n * uplink_loss * noise_var)
    out = tau_n * W * np.log1p(snr) / np.log(2.0)
    return float(out) if out.ndim == 0 else out


def offload_time(R_uav: float, scenario: Scenario) -> float:
    """Seconds the UAV needs to forward ``R_uav`` bits to the HAP at full power."""
    if R_uav < 0:
        raise ValueError("data volume must be non-negative")
    lb = LinkBudget.from_scenario(scenario)
    rate = scenario.bandwidth_W * np.log2(1.0 + lb.snr(scenario.p_uav))
    return float(R_uav / rate)
