"""Complex relative permittivity of moist mineral soil.

The default dielectric model is the mineralogy-based spectroscopic model of
Mironov, Kosolapova and Fomin (IEEE TGRS 47(7), 2009). Soil is treated as a
refractive mixture of dry solids, bound water and free (unbound) water; the two
water phases follow single Debye relaxations with Ohmic loss. All model
coefficients are regressions on the clay percentage and live in
:data:`MIRONOV_2009`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from .scenario import CONSTANTS

__all__ = [
    "SoilMedium",
    "MironovCoefficients",
    "MIRONOV_2009",
    "mironov_permittivity",
    "soil_permittivity",
    "permittivity_override",
    "medium_for",
    "FREQ_RANGE",
    "VWC_MAX",
]

FREQ_RANGE = (45e6, 26.5e9)
VWC_MAX = 0.6


@dataclass(frozen=True)
class SoilMedium:
    eps_real: float
    eps_imag: float
    source: Literal["model-computed", "user-specified"] = "model-computed"

    def __post_init__(self):
        if not self.eps_real >= 1.0:
            raise ValueError(f"eps_real must be >= 1, got {self.eps_real}")
        if not self.eps_imag >= 0.0:
            raise ValueError(f"eps_imag must be >= 0, got {self.eps_imag}")

    @property
    def eps(self) -> complex:
        return complex(self.eps_real, self.eps_imag)


@dataclass(frozen=True)
class MironovCoefficients:
    """Clay-percentage regressions of the mineralogy-based model.

    Each entry is a polynomial in clay percentage ``C`` (lowest order first);
    the free-water relaxation parameters and the high-frequency limit are
    constants.
    """

    n_dry: tuple = (1.634, -0.539e-2, 0.2748e-4)       # refractive index of dry soil
    k_dry: tuple = (0.03952, -0.04038e-2)              # normalized attenuation of dry soil
    mv_transition: tuple = (0.02863, 0.30673e-2)       # max bound water fraction
    eps0_bound: tuple = (79.8, -85.4e-2, 32.7e-4)      # static permittivity, bound water
    tau_bound: tuple = (1.062e-11, 3.450e-12 * 1e-2)   # relaxation time, bound water [s]
    sigma_bound: tuple = (0.3112, 0.467e-2)            # conductivity, bound water [S/m]
    sigma_free: tuple = (0.3631, 1.217e-2)             # conductivity, free water [S/m]
    eps0_free: float = 100.0
    tau_free: float = 8.5e-12
    eps_inf: float = 4.9

    @staticmethod
    def _poly(coeffs, clay_pct):
        return sum(c * clay_pct**i for i, c in enumerate(coeffs))

    def at_clay(self, clay_pct: float) -> dict:
        p = self._poly
        return {
            "n_dry": p(self.n_dry, clay_pct),
            "k_dry": p(self.k_dry, clay_pct),
            "mv_transition": p(self.mv_transition, clay_pct),
            "eps0_bound": p(self.eps0_bound, clay_pct),
            "tau_bound": p(self.tau_bound, clay_pct),
            "sigma_bound": p(self.sigma_bound, clay_pct),
            "sigma_free": p(self.sigma_free, clay_pct),
        }


MIRONOV_2009 = MironovCoefficients()


def _debye_index(eps0, tau, sigma, eps_inf, f):
    """Refractive index ``n`` and normalized attenuation ``k`` of a Debye water phase."""
    wt = 2.0 * np.pi * f * tau
    eps_r = eps_inf + (eps0 - eps_inf) / (1.0 + wt**2)
    eps_i = (eps0 - eps_inf) * wt / (1.0 + wt**2) + sigma / (2.0 * np.pi * f * CONSTANTS.eps_0)
    mod = np.hypot(eps_r, eps_i)
    n = np.sqrt((mod + eps_r) / 2.0)
    k = np.sqrt((mod - eps_r) / 2.0)
    return n, k


def mironov_permittivity(vwc, clay, f, coeffs: MironovCoefficients = MIRONOV_2009):
    """Raw model evaluation, vectorized over ``vwc``. Returns ``(eps_real, eps_imag)``."""
    vwc = np.asarray(vwc, dtype=float)
    c = coeffs.at_clay(100.0 * clay)
    n_b, k_b = _debye_index(c["eps0_bound"], c["tau_bound"], c["sigma_bound"], coeffs.eps_inf, f)
    n_u, k_u = _debye_index(coeffs.eps0_free, coeffs.tau_free, c["sigma_free"], coeffs.eps_inf, f)
    mvt = c["mv_transition"]
    bound = np.minimum(vwc, mvt)
    free = np.maximum(vwc - mvt, 0.0)
    n = c["n_dry"] + (n_b - 1.0) * bound + (n_u - 1.0) * free
    # The dry-soil attenuation regression crosses zero near 98 % clay; clamp it.
    k = max(c["k_dry"], 0.0) + k_b * bound + k_u * free
    return n**2 - k**2, 2.0 * n * k


DielectricModel = Callable[[float, float, float], tuple]


def soil_permittivity(vwc: float, clay: float, f: float,
                      model: DielectricModel = mironov_permittivity) -> SoilMedium:
    """Complex permittivity of soil at volumetric water content ``vwc``.

    Parameters
    ----------
    vwc : float
        Volumetric water content, 0 to 0.6.
    clay : float
        Clay mass fraction, 0 to 1.
    f : float
        Frequency in Hz, within the 45 MHz to 26.5 GHz validity band.
    model : callable, optional
        ``model(vwc, clay, f) -> (eps_real, eps_imag)``; defaults to the
        mineralogy-based model.
    """
    if not 0.0 <= vwc <= VWC_MAX:
        raise ValueError(f"vwc={vwc} outside [0, {VWC_MAX}]")
    if not 0.0 <= clay <= 1.0:
        raise ValueError(f"clay={clay} outside [0, 1]")
    if not FREQ_RANGE[0] <= f <= FREQ_RANGE[1]:
        raise ValueError(f"f={f:g} Hz outside the model band {FREQ_RANGE}")
    eps_r, eps_i = model(vwc, clay, f)
    return SoilMedium(float(eps_r), float(eps_i), "model-computed")


def permittivity_override(eps_real: float, eps_imag: float) -> SoilMedium:
    return SoilMedium(float(eps_real), float(eps_imag), "user-specified")


def medium_for(scenario) -> SoilMedium:
    """Soil medium of a scenario, honouring the permittivity override keys."""
    if scenario.soil_eps_real is not None:
        return permittivity_override(scenario.soil_eps_real, scenario.soil_eps_imag)
    return soil_permittivity(scenario.vwc_mv, scenario.clay_mc, scenario.carrier_f)
