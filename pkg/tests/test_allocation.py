import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st
from oracles import p3

from wpucn.allocation import (ApproachKind, InfeasibleEnergyError, LinkCoefficients, WetApproach,
                              flight_time, link_coefficients, min_charging_time, plan, required_tau,
                              slot_length_function, solve_time_allocation)
from wpucn.deployment import Deployment
from wpucn.scenario import Scenario
from wpucn.wet import Scheme

LN2 = np.log(2.0)
SC = Scenario()


def test_approach_parsing_and_sources():
    assert ApproachKind.parse("traditional_ps") is ApproachKind.TRADITIONAL_PS
    ps = WetApproach("ps", "AASS_II")
    uav = WetApproach("uav", uav_scheme="rab")
    hyb = WetApproach()
    assert [s for s, _ in ps.sources()] == ["hap"]
    assert uav.sources() == [("uav", Scheme.RAB)]
    assert hyb.sources() == [("hap", Scheme.AASS_II), ("uav", Scheme.RAB)]


def test_fixed_point_slot():
    assert required_tau(1.0, 100.0, 0.0, 12.5e6, 125e3) == pytest.approx(100.0, rel=1e-12)
    assert required_tau(2.0, 0.0, 50.0, 12.5e6, 125e3) == pytest.approx(100.0, rel=1e-12)


def test_slot_near_the_infimum():
    floor = 12.5e6 * LN2 / 125e3
    rhs = 1.0001 * floor
    tau = required_tau(1.0, rhs, 0.0, 12.5e6, 125e3)
    assert np.isfinite(tau) and tau > 1e4
    assert abs(slot_length_function(tau, 12.5e6, 125e3) - rhs) < 1e-8 * rhs


@given(st.floats(1.0001, 1e6), st.floats(1e3, 1e9), st.floats(1e3, 1e7))
def test_slot_matches_lambert_w(ratio, gamma, W):
    rhs = ratio * gamma * LN2 / W
    assert required_tau(1.0, rhs, 0.0, gamma, W) == pytest.approx(p3.tau_lambertw_mp(rhs, gamma, W), rel=1e-9)


def test_slot_length_is_strictly_decreasing():
    u = slot_length_function(np.geomspace(1e-1, 1e5, 200), 12.5e6, 125e3)
    assert np.all(np.diff(u) < 0)


def test_slot_below_infimum_is_infeasible():
    with pytest.raises(InfeasibleEnergyError):
        required_tau(1.0, 0.0, 12.5e6 * LN2 / 125e3, 12.5e6, 125e3)


def test_single_ud_matches_grid():
    W = 125e3
    T_p2, tau = solve_time_allocation(LinkCoefficients([1.0], [0.0]), 100 * W, W)
    _, best = p3.grid_minimum([1.0], [0.0], 100 * W, W)
    assert T_p2 + tau.sum() == pytest.approx(best, rel=1e-4)
    assert T_p2 + tau.sum() <= best * (1 + 1e-9)


def test_flight_energy_alone_suffices():
    W, gamma = 125e3, 12.5e6
    huge = 10 * slot_length_function(1.0, gamma, W)
    T_p2, tau = solve_time_allocation(LinkCoefficients([1.0, 2.0], [huge, huge]), gamma, W)
    assert 0 < T_p2 < 1e-6
    rates = tau * W * np.log2(1 + (np.array([1.0, 2.0]) * T_p2 + huge) / tau)
    assert np.all(rates >= gamma * (1 - 1e-9))


def test_homogeneous_uds_share_equally():
    T_p2, tau = solve_time_allocation(LinkCoefficients(np.full(5, 3.0), np.full(5, 2.0)), 1e6, 125e3)
    np.testing.assert_allclose(tau, tau[0], rtol=1e-12)


def test_rejects_nonpositive_coefficients():
    with pytest.raises(ValueError):
        LinkCoefficients([0.0], [0.0])
    with pytest.raises(ValueError):
        LinkCoefficients([1.0], [-1.0])
    with pytest.raises(ValueError):
        solve_time_allocation(LinkCoefficients([1.0], [0.0]), 0.0, 1.0)


@given(st.integers(1, 4), st.integers(0, 10_000))
def test_constraints_active_at_optimum(N, seed):
    rng = np.random.default_rng(seed)
    C = 10 ** rng.uniform(-1, 3, N)
    b = np.where(rng.random(N) < 0.5, 0.0, 10 ** rng.uniform(0, 3, N))
    gamma, W = 12.5e6, 125e3
    T_p2, tau = solve_time_allocation(LinkCoefficients(C, b), gamma, W)
    rate = tau * W * np.log2(1 + (C * T_p2 + b) / tau)
    assert np.max(np.abs(rate - gamma)) <= 1e-6 * gamma


@given(st.floats(1.0, 1e3), st.floats(0.1, 1e3), st.floats(0.0, 1e3), st.floats(0.0, 1e3))
def test_constraint_hessian_structure(tau, C, b, T_p2):
    gamma, W = 12.5e6, 125e3

    def f(t, T):
        return t * mp.expm1(mp.log(2) * gamma / (t * W)) - C * T - b

    with mp.workdps(40):
        d_tt = mp.diff(f, (tau, T_p2), (2, 0))
        d_tT = mp.diff(f, (tau, T_p2), (1, 1))
        d_TT = mp.diff(f, (tau, T_p2), (0, 2))
    assert d_tt > 0
    assert abs(d_tT) <= 1e-6 * d_tt and abs(d_TT) <= 1e-6 * d_tt


def test_charging_time():
    assert min_charging_time(56.45e3, SC) == pytest.approx(79.23, rel=0.005)
    assert min_charging_time(0.0, SC) == 0.0
    assert min_charging_time(2e3, SC) == pytest.approx(2 * min_charging_time(1e3, SC))


def test_coefficient_structure():
    uplink = np.array([1e4, 2e4])
    xi_h, xi_u = np.array([1e-6, 2e-6]), np.array([3e-5, 1e-5])
    ps = link_coefficients(WetApproach("ps"), SC, uplink, xi_hap=xi_h)
    uav = link_coefficients(WetApproach("uav"), SC, uplink, xi_uav=xi_u)
    hyb = link_coefficients(WetApproach("hybrid"), SC, uplink, xi_h, xi_u)
    assert flight_time(SC) == 70.0
    np.testing.assert_allclose(ps.b, 70.0 * ps.C, rtol=1e-15)
    assert np.all(uav.b == 0)
    np.testing.assert_allclose(hyb.C, ps.C + uav.C, rtol=1e-15)
    np.testing.assert_allclose(hyb.b, ps.b, rtol=1e-15)
    with pytest.raises(ValueError):
        link_coefficients(WetApproach("ps"), SC, uplink)


@pytest.fixture(scope="module")
def small_deployment():
    return Deployment(SC.replace(num_uds_N=16), seed=3)


def test_hybrid_beats_single_sources(small_deployment):
    sc = small_deployment.scenario
    plans = {k: plan(sc, WetApproach(k), draws=16, deployment=small_deployment) for k in ("ps", "uav", "hybrid")}
    obj = {k: p.T_p2 + p.T_p3 for k, p in plans.items()}
    assert obj["hybrid"] <= min(obj["ps"], obj["uav"])
    for p in plans.values():
        assert p.feasible and p.kkt_residual <= 1e-6 * p.gamma.max()
        assert p.T_p3 == pytest.approx(p.tau.sum(), rel=0, abs=0)
        assert p.T_total == pytest.approx(p.T_p1 + p.T_p2 + p.T_p3 + p.T_p4)


def test_plan_is_deterministic():
    sc = SC.replace(num_uds_N=8)
    a = plan(sc, WetApproach(), seed=5, draws=8)
    b = plan(sc, WetApproach(), seed=5, draws=8)
    assert a.summary() == b.summary()
    np.testing.assert_array_equal(a.tau, b.tau)


def test_default_hybrid_plan_against_reference_times():
    p = plan(SC, WetApproach(), seed=0, draws=50)
    assert p.T_p4 == pytest.approx(126.87, rel=0.01)
    assert p.E_s == pytest.approx(56.45e3, rel=0.08)
    assert p.kkt_residual <= 1e-6 * p.gamma.max()
