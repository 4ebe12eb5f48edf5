"""Modified Friis path loss for air-to-soil links.

Losses are linear power factors (``>1`` means attenuation). The downlink loss is
``delta = J * K_a2u * M``: free-space style air loss, refraction at the air/soil
interface and attenuation along a vertical soil path. The uplink drops the
refraction term.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scenario import CONSTANTS, PhysicalConstants, linear_to_db
from .soil import SoilMedium

__all__ = [
    "PathLossBreakdown",
    "attenuation_constants",
    "air_loss",
    "refraction_loss_a2u",
    "soil_loss",
    "total_downlink_loss",
    "uplink_loss",
]


@dataclass(frozen=True)
class PathLossBreakdown:
    air_J: np.ndarray | float
    refraction_K_a2u: float
    soil_M: float
    total_delta: np.ndarray | float
    alpha: float
    beta: float

    def as_db(self) -> dict:
        return {
            "air_J_db": linear_to_db(self.air_J),
            "refraction_K_a2u_db": linear_to_db(self.refraction_K_a2u),
            "soil_M_db": linear_to_db(self.soil_M),
            "total_delta_db": linear_to_db(self.total_delta),
        }


def attenuation_constants(medium: SoilMedium, f: float,
                          constants: PhysicalConstants = CONSTANTS) -> tuple[float, float]:
    """Attenuation constant ``alpha`` [Np/m] and phase constant ``beta`` [rad/m]."""
    er, ei = medium.eps_real, medium.eps_imag
    scale = 2.0 * np.pi * f * np.sqrt(constants.mu_r * constants.mu_0 * er * constants.eps_0 / 2.0)
    root = np.hypot(1.0, ei / er)
    # root - 1 loses precision for small loss tangents; use the conjugate form
    alpha = scale * np.sqrt((ei / er) ** 2 / (root + 1.0))
    beta = scale * np.sqrt(root + 1.0)
    return float(alpha), float(beta)


def air_loss(l, exponent: float, f: float, constants: PhysicalConstants = CONSTANTS):
    l = np.asarray(l, dtype=float)
    out = (4.0 * np.pi * f / constants.c) ** 2 * l**exponent
    return float(out) if out.ndim == 0 else out


def refraction_loss_a2u(medium: SoilMedium) -> float:
    er, ei = medium.eps_real, medium.eps_imag
    return float(((np.sqrt((np.hypot(er, ei) + er) / 2.0) + 1.0) / 4.0) ** 2)


def soil_loss(d, alpha: float, beta: float):
    d = np.asarray(d, dtype=float)
    out = (2.0 * beta * d * np.exp(alpha * d)) ** 2
    return float(out) if out.ndim == 0 else out


def _link_air_len(geometry, link: str):
    if link == "p2u":
        return geometry.air_len_p2u
    if link == "v2u":
        return geometry.air_len_v2u
    raise ValueError(f"unknown link {link!r}; expected 'p2u' or 'v2u'")


def total_downlink_loss(geometry, medium: SoilMedium, exponent: float, f: float,
                        link: str = "v2u",
                        constants: PhysicalConstants = CONSTANTS) -> PathLossBreakdown:
    """Downlink loss from the PS on ``link`` ('p2u' HAP, 'v2u' UAV) to the UD(s)."""
    alpha, beta = attenuation_constants(medium, f, constants)
    J = air_loss(_link_air_len(geometry, link), exponent, f, constants)
    K = refraction_loss_a2u(medium)
    M = soil_loss(geometry.soil_len, alpha, beta)
    return PathLossBreakdown(J, K, M, J * K * M, alpha, beta)


def uplink_loss(geometry, medium: SoilMedium, exponent: float, f: float,
                link: str = "v2u", constants: PhysicalConstants = CONSTANTS):
    """UD-to-receiver loss; the soil-to-air refraction factor is taken as 1."""
    alpha, beta = attenuation_constants(medium, f, constants)
    J = air_loss(_link_air_len(geometry, link), exponent, f, constants)
    return J * soil_loss(geometry.soil_len, alpha, beta)
