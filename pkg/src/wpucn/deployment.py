"""One sampled deployment: UD placement, path losses and per-PS fading draws.

A :class:`Deployment` fixes the UD positions. Incident powers for any
(power source, scheme) pair are drawn from a fading stream keyed by
``(seed, power source)`` alone. Two schemes evaluated on the same deployment
therefore see identical channels, which keeps comparisons between schemes and
approaches paired.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .channel import ChannelRealization, complex_normal, rician_mix
from .maxmin import MaxMinInstance, solve_maxmin
from .propagation import total_downlink_loss, uplink_loss
from .scenario import Scenario, compute_geometry, db_to_linear, sample_ud_positions
from .soil import medium_for
from .wet import Precoder, Scheme, ps_transmit_power, incident_power

__all__ = ["PowerSource", "Deployment", "POWER_SOURCES", "stream_seed"]


@dataclass(frozen=True)
class PowerSource:
    """Static description of a transmitter that charges the UDs."""

    name: str            # "hap" or "uav"
    link: str            # propagation link key
    stream: int          # fading stream id


POWER_SOURCES = {
    "hap": PowerSource("hap", "p2u", 1),
    "uav": PowerSource("uav", "v2u", 2),
}


def stream_seed(seed: int, *keys: int) -> np.random.SeedSequence:
    """Seed sequence for a named sub-stream; independent of evaluation order."""
    return np.random.SeedSequence([int(seed), *map(int, keys)])


class Deployment:
    """UD placement plus everything that depends only on geometry.

    Parameters
    ----------
    scenario : Scenario
    seed : int
        Master seed. Placement uses stream 0; fading for each power source uses
        its own stream, so results do not depend on call order.
    positions : array, optional
        Explicit ``(N, 3)`` UD positions instead of a random placement.
    """

    def __init__(self, scenario: Scenario, seed: int, positions=None):
        self.scenario = scenario
        self.seed = int(seed)
        if positions is None:
            positions = sample_ud_positions(scenario, stream_seed(seed, 0))
        self.positions = np.asarray(positions, dtype=float)
        self.geometry = compute_geometry(scenario, self.positions)
        self.medium = medium_for(scenario)
        self._cache: dict = {}

    @property
    def N(self) -> int:
        return self.positions.shape[0]

    def _link_params(self, ps: str):
        sc = self.scenario
        if ps == "hap":
            return sc.pathloss_exp_p2u, sc.rician_p2u, self.geometry.azimuth_p2u, sc.gain_hap
        if ps == "uav":
            return sc.pathloss_exp_v2u, sc.rician_v2u, self.geometry.azimuth_v2u, sc.gain_uav
        raise ValueError(f"unknown power source {ps!r}")

    def downlink_loss(self, ps: str) -> np.ndarray:
        exponent = self._link_params(ps)[0]
        br = total_downlink_loss(self.geometry, self.medium, exponent, self.scenario.carrier_f,
                                 link=POWER_SOURCES[ps].link, constants=self.scenario.constants)
        return np.asarray(br.total_delta, dtype=float)

    @cached_property
    def uplink_loss(self) -> np.ndarray:
        """UD-to-UAV loss, which sets the data-collection SNR."""
        sc = self.scenario
        return np.asarray(uplink_loss(self.geometry, self.medium, sc.pathloss_exp_v2u,
                                      sc.carrier_f, link="v2u", constants=sc.constants))

    def eh_gain(self, ps: str) -> float:
        """Linear antenna gain from incident power to EH-circuit input."""
        return float(db_to_linear(self._link_params(ps)[3] + self.scenario.gain_ud))

    def fading(self, ps: str, draws: int, start: int = 0) -> np.ndarray:
        """Scattered components ``(draws, N, Q)`` of draws ``start .. start+draws-1``.

        Draw ``k`` of a power source is the same array whatever block it is
        requested in.
        """
        Q = self.scenario.num_antennas_Q
        out = np.empty((draws, self.N, Q), dtype=complex)
        for i in range(draws):
            rng = np.random.default_rng(stream_seed(self.seed, POWER_SOURCES[ps].stream, start + i))
            out[i] = complex_normal(rng, (self.N, Q))
        return out

    def incident_draws(self, ps: str, scheme, draws: int, block: int = 64) -> np.ndarray:
        """Incident power ``(draws, N)`` in watts at every UD for each fading draw.

        Full-CSI draws solve one max-min beamforming problem per draw.
        """
        scheme = Scheme.parse(scheme)
        key = (ps, scheme, draws)
        if key in self._cache:
            return self._cache[key]
        sc = self.scenario
        Q = sc.num_antennas_Q
        _, kappa, theta, _ = self._link_params(ps)
        p = ps_transmit_power(sc, ps, scheme, Q)
        delta = self.downlink_loss(ps)
        out = np.empty((draws, self.N))
        for start in range(0, draws, block):
            stop = min(start + block, draws)
            scatter = self.fading(ps, stop - start, start)
            h = rician_mix(theta, kappa, scatter)
            if scheme is Scheme.FULL_CSI:
                for j in range(stop - start):
                    inst = MaxMinInstance.from_channels(h[j], p, delta)
                    sol = solve_maxmin(inst)
                    out[start + j] = inst.values(sol.V)
            else:
                real = ChannelRealization(h, theta, kappa, f"{ps}->ud", scatter)
                out[start:stop] = incident_power(Precoder(scheme, Q), real, p, delta)
        self._cache[key] = out
        return out

    def expected_incident(self, ps: str, scheme, draws: int) -> np.ndarray:
        """Fading-averaged incident power per UD, in watts."""
        return self.incident_draws(ps, scheme, draws).mean(axis=0)
