"""Downlink WET: precoding schemes, transmit-power budget and harvested energy."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelRealization, complex_normal, rician_mix
from .scenario import Scenario, db_to_linear

__all__ = [
    "Scheme",
    "Precoder",
    "MotorParams",
    "PowerBudget",
    "BudgetExhaustedError",
    "motor_power",
    "transmit_power",
    "power_budget",
    "incident_power",
    "expected_incident_power",
    "harvested_energy",
    "alternating_vector",
]


class Scheme(str, enum.Enum):
    SA = "SA"
    AAIS = "AAIS"
    AASS_I = "AASS_I"
    AASS_II = "AASS_II"
    RAB = "RAB"
    FULL_CSI = "FULL_CSI"

    @classmethod
    def parse(cls, name) -> "Scheme":
        if isinstance(name, cls):
            return name
        key = str(name).upper().replace("-", "_").replace(" ", "_")
        aliases = {"FULLCSI": "FULL_CSI", "CSI": "FULL_CSI", "AASSI": "AASS_I", "AASSII": "AASS_II"}
        return cls(aliases.get(key, key))

    @property
    def csi_free(self) -> bool:
        return self is not Scheme.FULL_CSI


class BudgetExhaustedError(ValueError):
    """The power budget leaves no transmit power for the chosen scheme and Q."""


def alternating_vector(Q: int) -> np.ndarray:
    """AASS-II precoder: ``+1, -1, +1, ...`` (phase ``mod(q-1, 2) * pi``)."""
    return np.where(np.arange(Q) % 2 == 0, 1.0, -1.0).astype(complex)


@dataclass(frozen=True)
class Precoder:
    """Energy-symbol structure ``{K, p_k, v_k}`` of a WET scheme.

    For ``FULL_CSI`` the covariance ``V`` (Hermitian PSD, unit trace) is
    stored; its eigen-decomposition gives the symbols. SA uses one antenna per
    sub-block, so its single symbol's precoder is the active unit vector.
    """

    scheme: Scheme
    Q: int
    V: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme.parse(self.scheme))
        if self.Q < 1:
            raise ValueError("Q must be >= 1")
        if self.scheme is Scheme.FULL_CSI:
            if self.V is None:
                raise ValueError("FULL_CSI precoder needs a covariance V")
            V = np.asarray(self.V, dtype=complex)
            if V.shape[-2:] != (self.Q, self.Q):
                raise ValueError(f"V must be {self.Q}x{self.Q}")
            object.__setattr__(self, "V", V)

    @property
    def rotation_steps(self) -> int:
        return self.Q if self.scheme is Scheme.RAB else 0

    @property
    def K(self) -> int:
        if self.scheme is Scheme.AAIS:
            return self.Q
        if self.scheme is Scheme.FULL_CSI:
            return int(np.linalg.matrix_rank(self.V, hermitian=True))
        return 1

    def symbols(self, p: float, subblock: int = 0) -> tuple[np.ndarray, np.ndarray]:
        """Per-symbol powers ``p_k`` (shape ``(K,)``) and precoders ``v_k`` (``(K, Q)``).

        ``subblock`` selects the active antenna for SA.
        """
        Q = self.Q
        s = self.scheme
        if s is Scheme.SA:
            v = np.zeros((1, Q), complex)
            v[0, subblock % Q] = 1.0
            return np.array([p]), v
        if s is Scheme.AAIS:
            return np.full(Q, p / Q), np.eye(Q, dtype=complex)
        if s is Scheme.AASS_I:
            return np.array([p / Q]), np.ones((1, Q), complex)
        if s in (Scheme.AASS_II, Scheme.RAB):
            return np.array([p / Q]), alternating_vector(Q)[None, :]
        lam, U = np.linalg.eigh(self.V)
        keep = lam > 1e-12 * max(lam.max(), 1e-300)
        lam, U = lam[keep], U[:, keep]
        # |h^T v|^2 with v = conj(u) reproduces u^H h h^H u, i.e. tr(V h h^H)
        return p * lam / lam.sum(), U.conj().T


@dataclass(frozen=True)
class MotorParams:
    t0: float = 1.0e-3
    tf: float = 20e-3
    voltage: float = 5.0
    current: float = 0.25
    pulse_span: float = 1e-3

    @classmethod
    def from_scenario(cls, sc: Scenario) -> "MotorParams":
        return cls(sc.motor_t0, sc.motor_tf, sc.motor_voltage, sc.motor_current)


def motor_power(Q: int, t0: float, tf: float, voltage: float, current: float,
                pulse_span: float = 1e-3) -> float:
    """Servo power for a ``Q``-step rotation sweep driven by PWM.

    The pulse width steps from ``t0`` to ``t0 + pulse_span`` over the ``Q + 1``
    positions; all times in seconds.
    """
    if Q < 2:
        raise ValueError("rotation needs Q >= 2")
    if tf <= 0:
        raise ValueError("tf must be positive")
    q = np.arange(Q + 1)
    pulses = np.sum(t0 + pulse_span * q / Q)
    return float(pulses / tf * voltage * current)


@dataclass(frozen=True)
class PowerBudget:
    budget: float
    scheme: Scheme
    Q: int
    p: float
    motor: float


def power_budget(P_b: float, scheme, Q: int, eta: float, P_rf: float, P_c: float,
                 motor: MotorParams | None = None) -> PowerBudget:
    scheme = Scheme.parse(scheme)
    rf_chains = Q if scheme in (Scheme.FULL_CSI, Scheme.AAIS) else 1
    # a single-element "rotating" array is plain AASS-II: no servo
    p_motor = 0.0
    if scheme is Scheme.RAB and Q >= 2:
        m = motor or MotorParams()
        p_motor = motor_power(Q, m.t0, m.tf, m.voltage, m.current, m.pulse_span)
    p = eta * (P_b - rf_chains * P_rf - P_c - p_motor)
    if not p > 0:
        raise BudgetExhaustedError(
            f"{scheme.value} with Q={Q}: overheads exceed the {P_b:g} W budget (p={p:g} W)"
        )
    return PowerBudget(P_b, scheme, Q, float(p), p_motor)


def transmit_power(P_b: float, scheme, Q: int, eta: float, P_rf: float, P_c: float,
                   motor: MotorParams | None = None) -> float:
    return power_budget(P_b, scheme, Q, eta, P_rf, P_c, motor).p


def ps_transmit_power(scenario: Scenario, ps: str, scheme, Q: int | None = None) -> float:
    """Transmit power of the HAP (``ps='hap'``) or UAV (``ps='uav'``) for ``scheme``."""
    P_b = {"hap": scenario.p_hap, "uav": scenario.p_uav}[ps]
    return transmit_power(P_b, scheme, Q or scenario.num_antennas_Q, scenario.amp_eff_eta,
                          scenario.p_rf_chain, scenario.p_circuit,
                          MotorParams.from_scenario(scenario))


def _as_channel(channel):
    if isinstance(channel, ChannelRealization):
        return channel.h, channel
    return np.asarray(channel, dtype=complex), None


def incident_power(precoder: Precoder, channel, p: float, delta) -> np.ndarray:
    """Waveform-averaged incident RF power at the UD(s), in watts.

    ``channel`` is a :class:`ChannelRealization` or an array whose last axis
    has length ``Q``; RAB needs the realization to re-steer the array. For
    FULL_CSI, ``precoder.V`` may carry leading batch axes matching ``channel``'s
    leading axes minus the UD axis.
    """
    h, real = _as_channel(channel)
    Q = precoder.Q
    if h.shape[-1] != Q:
        raise ValueError(f"channel has {h.shape[-1]} elements, precoder expects {Q}")
    s = precoder.scheme
    if s in (Scheme.SA, Scheme.AAIS):
        # SA: full power on one antenna per sub-block, time-averaged over Q sub-blocks
        # AAIS: p/Q on each of Q independent symbols; both reduce to mean |h_q|^2
        gain = np.mean(np.abs(h) ** 2, axis=-1)
    elif s is Scheme.AASS_I:
        gain = np.abs(h.sum(axis=-1)) ** 2 / Q
    elif s is Scheme.AASS_II:
        gain = np.abs(h @ alternating_vector(Q)) ** 2 / Q
    elif s is Scheme.RAB:
        if real is None:
            raise TypeError("RAB needs a ChannelRealization to rotate the array")
        v = alternating_vector(Q)
        acc = np.zeros(h.shape[:-1])
        for q in range(1, Q + 1):
            hq = real.rotated(q * np.pi / Q)
            acc += np.abs(hq @ v) ** 2
        gain = acc / Q / Q
    else:
        V = precoder.V
        if V.ndim == 2:
            gain = np.einsum("...i,ij,...j->...", h.conj(), V, h).real
        else:
            gain = np.einsum("...ni,...ij,...nj->...n", h.conj(), V, h).real
    return p * gain / np.asarray(delta, dtype=float)


def expected_incident_power(precoder: Precoder, theta, kappa: float, p: float, delta,
                            trials: int, seed) -> tuple[np.ndarray, np.ndarray]:
    """Monte Carlo mean and standard error of :func:`incident_power` over fading."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    theta = np.asarray(theta, dtype=float)
    scatter = complex_normal(rng, (trials,) + theta.shape + (precoder.Q,))
    h = rician_mix(theta, kappa, scatter)
    real = ChannelRealization(h, theta, kappa, "uav->ud", scatter)
    xi = incident_power(precoder, real, p, delta)
    mean = xi.mean(axis=0)
    stderr = xi.std(axis=0, ddof=1) / np.sqrt(trials) if trials > 1 else np.zeros_like(mean)
    return mean, stderr


def harvested_energy(xi, zeta: float, g_ps_dbi: float, g_ud_dbi: float, duration: float,
                     psi_dbm: float):
    """Energy harvested over ``duration`` under the linear EH model.

    The sensitivity ``psi_dbm`` applies to the power at the EH input
    (antenna gains included); input exactly at the threshold is harvested.
    """
    if duration < 0:
        raise ValueError("duration must be non-negative")
    p_in = db_to_linear(g_ps_dbi + g_ud_dbi) * np.asarray(xi, dtype=float)
    psi = db_to_linear(psi_dbm - 30.0)
    out = np.where(p_in >= psi, zeta * p_in * duration, 0.0)
    return float(out) if out.ndim == 0 else out
