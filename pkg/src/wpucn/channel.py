"""Rician-faded ULA channels with half-wavelength element spacing.

Seeding: every sampling call takes either an integer seed or a
``numpy.random.Generator``. Parallel trials must use distinct seeds; derive
them with ``numpy.random.SeedSequence(seed).spawn(n)`` (or pass the spawned
sequences' generators) so results do not depend on worker count.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

__all__ = ["ChannelRealization", "steering_vector", "complex_normal", "rician_mix", "sample_rician"]

LOS_ONLY_KAPPA = 1e12


def steering_vector(theta, Q: int) -> np.ndarray:
    """LOS array response ``exp(-1j * t * pi * sin(theta))`` for ``t = 0..Q-1``.

    ``theta`` may be an array; the element axis is appended last.
    """
    if Q < 1:
        raise ValueError("Q must be >= 1")
    t = np.arange(Q)
    return np.exp(-1j * np.pi * np.multiply.outer(np.sin(theta), t))


def complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    """Circularly-symmetric CN(0, 1) samples."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def rician_mix(theta, kappa: float, scatter: np.ndarray, los_only: bool = False) -> np.ndarray:
    """Combine the LOS response at ``theta`` with a scattered component."""
    Q = scatter.shape[-1]
    los = steering_vector(theta, Q)
    if los_only or np.isinf(kappa):
        return los
    return np.sqrt(kappa / (1.0 + kappa)) * los + np.sqrt(1.0 / (1.0 + kappa)) * scatter


@dataclass(frozen=True)
class ChannelRealization:
    """One quasi-static block of a PS-to-UD channel (or a batch of UDs).

    ``scatter`` keeps the NLOS draw so the same block can be re-steered when
    the array rotates.
    """

    h: np.ndarray
    theta: np.ndarray | float
    kappa: float
    link: Literal["hap->ud", "uav->ud"]
    scatter: np.ndarray
    los_only: bool = False

    @property
    def Q(self) -> int:
        return self.h.shape[-1]

    def rotated(self, angle: float) -> np.ndarray:
        """Channel seen after rotating the array by ``angle`` (same scattering)."""
        return rician_mix(np.asarray(self.theta) + angle, self.kappa, self.scatter, self.los_only)


def sample_rician(theta, kappa: float, Q: int, seed, link="uav->ud",
                  los_only: bool = False) -> ChannelRealization:
    """Draw ``h = sqrt(k/(1+k)) h_los(theta) + sqrt(1/(1+k)) w`` with ``w ~ CN(0, I)``.

    ``kappa >= 1e12`` is treated as the pure-LOS limit, as is ``los_only``.
    """
    if kappa < 0:
        raise ValueError("kappa must be non-negative")
    los_only = los_only or kappa >= LOS_ONLY_KAPPA
    rng = np.random.default_rng(seed)
    theta_arr = np.asarray(theta, dtype=float)
    scatter = complex_normal(rng, theta_arr.shape + (Q,))
    h = rician_mix(theta_arr, kappa, scatter, los_only)
    return ChannelRealization(h, theta if np.ndim(theta) else float(theta), float(kappa),
                              link, scatter, los_only)
