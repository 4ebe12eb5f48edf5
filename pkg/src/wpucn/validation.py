"""Self-checks against frozen reference values and closed-form cases.

``run_validation()`` runs every registered check and returns a report; the
``validate`` CLI subcommand exits non-zero when any check fails. Reference
values live in ``data/golden.json`` and were produced by an independent
high-precision implementation.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable

import numpy as np
from scipy.integrate import simpson

__all__ = ["CheckResult", "ValidationReport", "run_validation", "CHECKS", "load_golden"]


@dataclass
class CheckResult:
    module: str
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0


@dataclass
class ValidationReport:
    results: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list:
        return [r for r in self.results if not r.passed]

    def format(self) -> str:
        lines = []
        for r in self.results:
            flag = "PASS" if r.passed else "FAIL"
            extra = f"  ({r.detail})" if r.detail else ""
            lines.append(f"{flag}  {r.module}.{r.name}{extra}")
        lines.append(f"{len(self.results) - len(self.failures)}/{len(self.results)} checks passed")
        return "\n".join(lines)


CHECKS: list[tuple[str, str, Callable]] = []


def check(module: str):
    def register(fn):
        CHECKS.append((module, fn.__name__, fn))
        return fn
    return register


def load_golden(path=None) -> dict:
    if path is not None:
        with open(path) as fh:
            return json.load(fh)
    return json.loads(resources.files("wpucn").joinpath("data/golden.json").read_text())


def _close(actual, expected, rtol, label):
    ok = math.isclose(actual, expected, rel_tol=rtol, abs_tol=0.0)
    return ok, f"{label}: got {actual:.12g}, expected {expected:.12g}"


# ---------------------------------------------------------------- scenario

@check("scenario")
def positions_inside_disk(golden):
    from .scenario import Scenario, sample_ud_positions
    sc = Scenario()
    pts = np.concatenate([sample_ud_positions(sc, s) for s in range(5)])
    r = np.hypot(pts[:, 0], pts[:, 1])
    return bool(np.all(r <= sc.radius_R) and np.all(pts[:, 2] == -sc.burial_depth_du)), f"max r={r.max():.6f}"


@check("scenario")
def zero_radius_collapses(golden):
    from .scenario import Scenario, sample_ud_positions
    pts = sample_ud_positions(Scenario(radius_R=0.0), 3)
    return bool(np.all(pts[:, :2] == 0.0)), ""


@check("scenario")
def unknown_key_rejected(golden):
    from .scenario import ConfigError, load_scenario
    try:
        load_scenario('{"not_a_key": 1}')
    except ConfigError as exc:
        return "not_a_key" in str(exc), str(exc)
    return False, "no error raised"


@check("scenario")
def uav_azimuth_convention(golden):
    from .scenario import Scenario, compute_geometry
    g = compute_geometry(Scenario(), [0.0, 5.0, -0.4])
    return math.isclose(g.azimuth_v2u, math.pi / 2), f"azimuth={g.azimuth_v2u}"


# -------------------------------------------------------------------- soil

@check("soil")
def soil_golden(golden):
    from .soil import soil_permittivity
    worst = 0.0
    for mv, ref in golden["soil_433MHz_clay38"].items():
        m = soil_permittivity(float(mv), 0.38, 433e6)
        worst = max(worst, abs(m.eps_real / ref["eps_real"] - 1), abs(m.eps_imag / ref["eps_imag"] - 1))
    return worst < 1e-9, f"max rel err {worst:.2e}"


@check("soil")
def soil_monotone_in_vwc(golden):
    from .soil import mironov_permittivity
    er, ei = mironov_permittivity(np.linspace(0.0, 0.6, 61), 0.38, 433e6)
    return bool(np.all(np.diff(er) > 0) and np.all(np.diff(ei) > 0)), ""


# ------------------------------------------------------------- propagation

@check("propagation")
def propagation_golden(golden):
    from .propagation import air_loss, attenuation_constants, refraction_loss_a2u, soil_loss
    from .soil import soil_permittivity
    ref = golden["propagation_default"]
    m = soil_permittivity(0.15, 0.38, 433e6)
    alpha, beta = attenuation_constants(m, 433e6)
    got = {
        "alpha": alpha, "beta": beta, "K_a2u": refraction_loss_a2u(m),
        "M_0.4m": soil_loss(0.4, alpha, beta), "J_10m_exp2": air_loss(10.0, 2.0, 433e6),
    }
    errs = {k: abs(got[k] / ref[k] - 1) for k in ref}
    bad = [k for k, e in errs.items() if e > 1e-9]
    return not bad, f"mismatch in {bad}" if bad else f"max rel err {max(errs.values()):.1e}"


@check("propagation")
def lossless_soil_has_no_attenuation(golden):
    from .propagation import attenuation_constants
    from .soil import permittivity_override
    alpha, _ = attenuation_constants(permittivity_override(4.0, 0.0), 433e6)
    return alpha == 0.0, f"alpha={alpha}"


# ---------------------------------------------------------------- channel

@check("channel")
def mean_channel_power(golden):
    from .channel import sample_rician
    real = sample_rician(np.zeros(20000), 3.0, 8, seed=11)
    est = float(np.mean(np.sum(np.abs(real.h) ** 2, axis=-1)))
    return abs(est / 8 - 1) < 0.02, f"E||h||^2={est:.4f}"


@check("channel")
def los_only_is_unit_modulus(golden):
    from .channel import sample_rician
    real = sample_rician(0.7, 1e13, 16, seed=0)
    return bool(np.allclose(np.abs(real.h), 1.0)), ""


# --------------------------------------------------------------------- wet

@check("wet")
def power_conservation(golden):
    from .wet import Precoder, Scheme
    rng = np.random.default_rng(5)
    worst = 0.0
    for scheme in Scheme:
        for _ in range(20):
            Q = int(rng.integers(1, 9))
            V = None
            if scheme is Scheme.FULL_CSI:
                X = rng.standard_normal((Q, Q)) + 1j * rng.standard_normal((Q, Q))
                V = X @ X.conj().T
                V /= np.trace(V).real
            p = float(rng.uniform(0.1, 5.0))
            pk, vk = Precoder(scheme, Q, V).symbols(p)
            total = float(np.sum(pk * np.sum(np.abs(vk) ** 2, axis=1)))
            worst = max(worst, abs(total - p) / p)
    return worst < 1e-9, f"max rel err {worst:.1e}"


@check("wet")
def motor_power_golden(golden):
    from .wet import motor_power
    ref = golden["motor_power_Q32_ms"]
    ok = all(math.isclose(motor_power(32, float(t0) * 1e-3, 20e-3, 5.0, 0.25), v, rel_tol=1e-12)
             for t0, v in ref.items())
    return ok, ""


@check("wet")
def rab_single_antenna_is_aass_ii(golden):
    from .channel import sample_rician
    from .wet import Precoder, incident_power
    real = sample_rician(np.linspace(0, 6, 50), 10.0, 1, seed=2)
    a = incident_power(Precoder("RAB", 1), real, 1.0, 1.0)
    b = incident_power(Precoder("AASS_II", 1), real, 1.0, 1.0)
    return bool(np.allclose(a, b, rtol=1e-12)), ""


# ------------------------------------------------------------------ maxmin

@check("maxmin")
def maxmin_single_ud(golden):
    from .maxmin import MaxMinInstance, solve_maxmin
    sol = solve_maxmin(MaxMinInstance.from_channels([[1.0, 1.0]], 1.0, 1.0, tolerance=1e-9))
    return abs(sol.xi_csi - 2.0) < 1e-6, f"xi={sol.xi_csi}"


@check("maxmin")
def maxmin_orthogonal_pair(golden):
    from .maxmin import MaxMinInstance, solve_maxmin
    sol = solve_maxmin(MaxMinInstance.from_channels(np.eye(2), 1.0, 1.0, tolerance=1e-9))
    return abs(sol.xi_csi - 0.5) < 1e-6 and np.allclose(sol.V, np.eye(2) / 2, atol=1e-5), f"xi={sol.xi_csi}"


@check("maxmin")
def maxmin_vs_grid_search(golden):
    from .maxmin import MaxMinInstance, brute_force_maxmin, solve_maxmin
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(10):
        h = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
        inst = MaxMinInstance.from_channels(h, 1.0, rng.uniform(0.5, 1.5, 3), tolerance=1e-8)
        xi = solve_maxmin(inst).xi_csi
        ref, _ = brute_force_maxmin(inst)
        worst = max(worst, abs(xi - ref) / ref)
    return worst <= 1e-3, f"max rel gap {worst:.1e}"


# -------------------------------------------------------------- uav_energy

@check("uav_energy")
def propulsion_golden(golden):
    from .uav_energy import UavPhysics, propulsion_power
    ph = UavPhysics()
    ok0, d0 = _close(propulsion_power(ph, 0.0), golden["uav"]["P_0"], 1e-12, "P(0)")
    ok1, d1 = _close(propulsion_power(ph, 10.0), golden["uav"]["P_10"], 1e-12, "P(10)")
    return ok0 and ok1, f"{d0}; {d1}"


@check("uav_energy")
def accel_energy_refinement(golden):
    from .uav_energy import UavPhysics, accel_energy, propulsion_power
    ph = UavPhysics()
    value = accel_energy(ph)
    t = np.linspace(0.0, ph.V / ph.a, 201)
    coarse = simpson(propulsion_power(ph, ph.a * t[::2]), x=t[::2])
    fine = simpson(propulsion_power(ph, ph.a * t), x=t)
    ok = abs(fine - coarse) / fine < 1e-6 and abs(value - fine) / fine < 1e-6
    ok_ref, d = _close(value, golden["uav"]["accel_energy"], 1e-9, "E_acc")
    return ok and ok_ref, d


@check("uav_energy")
def flight_times(golden):
    from .uav_energy import UavPhysics, round_trip_leg
    _, T_fly, T_fly_V = round_trip_leg(UavPhysics(), 600.0)
    return T_fly == 70.0 and T_fly_V == 50.0, f"T_fly={T_fly}, T_fly_V={T_fly_V}"


# -------------------------------------------------------------------- link

@check("link")
def link_golden(golden):
    from .link import offload_time, uav_receive_power
    from .scenario import Scenario
    sc = Scenario()
    ok1, d1 = _close(uav_receive_power(sc), golden["link"]["uav_receive_power"], 1e-9, "P_recv")
    ok2, d2 = _close(offload_time(64 * 12.5e6, sc), golden["link"]["offload_time_64x12.5Mbit"],
                     1e-9, "T_p4")
    return ok1 and ok2, f"{d1}; {d2}"


@check("link")
def zero_energy_zero_bits(golden):
    from .link import ud_throughput
    return ud_throughput(3.0, 0.0, 1e6, 1.6, 3.2, 0.6, 125e3, 2e-15) == 0.0, ""


# -------------------------------------------------------------- allocation

@check("allocation")
def tau_fixed_point(golden):
    from .allocation import required_tau
    tau = required_tau(1.0, 0.0, 100.0, 12.5e6, 125e3)
    return abs(tau - 100.0) < 1e-8, f"tau={tau!r}"


@check("allocation")
def single_ud_matches_grid(golden):
    from .allocation import LinkCoefficients, required_tau, solve_time_allocation
    gamma, W = 12.5e6, 125e3
    T2, tau = solve_time_allocation(LinkCoefficients([1.0], [0.0]), gamma, W)
    obj = T2 + tau.sum()
    lo = gamma * np.log(2) / W
    grid = np.linspace(lo * 1.0001, 20 * lo, 20001)
    ref = min(t + required_tau(1.0, 0.0, t, gamma, W) for t in grid)
    return obj <= ref * (1 + 1e-4) and obj >= ref * (1 - 1e-4), f"solver {obj:.8g} vs grid {ref:.8g}"


@check("allocation")
def charging_time_consistency(golden):
    from .allocation import min_charging_time
    from .scenario import Scenario
    t = min_charging_time(56.45e3, Scenario())
    return abs(t / 79.23 - 1) <= 0.005, f"T_p1={t:.3f} s"


@check("allocation")
def small_plan_kkt(golden):
    from .allocation import WetApproach, plan
    from .scenario import Scenario
    sc = Scenario(num_uds_N=6, num_antennas_Q=8)
    worst = 0.0
    for kind in ("ps", "uav", "hybrid"):
        p = plan(sc, WetApproach(kind), seed=3, draws=20)
        worst = max(worst, p.kkt_residual / sc.throughput_gamma)
        if not p.feasible:
            return False, f"{kind} infeasible"
    return worst <= 1e-6, f"max residual/gamma {worst:.1e}"


# ----------------------------------------------------------------- harness

@check("harness")
def metric_unit_conversion(golden):
    from .harness import worst_case_metric
    a, _ = worst_case_metric([1e-3])
    b, _ = worst_case_metric([1e-3, 3e-3])
    return abs(a) < 1e-12 and abs(b - 10 * math.log10(2)) < 1e-12, f"{a}, {b}"


@check("harness")
def sweep_is_reproducible(golden):
    from .allocation import WetApproach
    from .harness import SweepSpec, run_wet_sweep, sweep_to_csv
    from .scenario import Scenario
    sweep = SweepSpec("num_antennas", (4, 8), (WetApproach("hybrid"),), trials=5,
                     base=Scenario(num_uds_N=8), seed=9)
    return sweep_to_csv(run_wet_sweep(sweep)) == sweep_to_csv(run_wet_sweep(sweep)), ""


def run_validation(filter: str | None = None, golden_path=None) -> ValidationReport:
    """Run the registered checks; ``filter`` restricts them to one module."""
    golden = load_golden(golden_path)
    report = ValidationReport()
    for module, name, fn in CHECKS:
        if filter and module != filter:
            continue
        start = time.perf_counter()
        try:
            passed, detail = fn(golden)
        except Exception as exc:          # a crashing check is a failing check
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        report.results.append(CheckResult(module, name, bool(passed), detail,
                                          time.perf_counter() - start))
    return report
