"""Simulation library for UAV-assisted wireless-powered underground sensor networks.

Modules
-------
scenario     configuration, constants and deployment geometry
soil         complex permittivity of moist soil
propagation  air/soil path loss
channel      Rician ULA channels
wet          energy-transfer schemes and transmit-power budget
maxmin       max-min fair full-CSI beamforming
uav_energy   propulsion power and mission energy
link         HAP-UAV link budget and UD uplink throughput
allocation   optimal charge/transmit/offload time allocation
harness      Monte Carlo sweeps and comparison tables
"""
from .allocation import ApproachKind, WetApproach, plan
from .scenario import ConfigError, Scenario, load_scenario
from .wet import Scheme

__version__ = "0.1.0"

__all__ = ["ApproachKind", "ConfigError", "Scenario", "Scheme", "WetApproach", "load_scenario", "plan"]
