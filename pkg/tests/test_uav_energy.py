import numpy as np
import pytest
from hypothesis import given, strategies as st

from wpucn.scenario import Scenario
from wpucn.uav_energy import (GeometryError, UavPhysics, accel_energy, hover_energy,
                              propulsion_power, round_trip_leg, total_uav_energy)

PH = UavPhysics.from_scenario(Scenario())


def test_hover_power_is_sum_of_profile_and_induced():
    assert propulsion_power(PH, 0.0) == 56.2926
    assert PH.hover_power == 56.2926


def test_cruise_power_golden(golden):
    assert propulsion_power(PH, 10.0) == pytest.approx(golden["uav"]["P_10"], rel=1e-12)
    assert propulsion_power(PH, 10.0) == pytest.approx(40.6, abs=0.05)


def test_parasite_term():
    parasite = 0.5 * 0.5009 * 1.225 * 0.1248 * 0.1256 * 1000
    assert parasite == pytest.approx(4.81, abs=5e-3)
    no_drag = UavPhysics.from_scenario(Scenario()).__class__(**{**PH.__dict__, "d_0": 1e-300})
    assert propulsion_power(PH, 10.0) - propulsion_power(no_drag, 10.0) == pytest.approx(parasite, rel=1e-12)


def test_hover_energy():
    assert hover_energy(PH, 0.0) == 0.0
    assert hover_energy(PH, 900.26) == pytest.approx(50.68e3, rel=1e-3)
    assert hover_energy(PH, 200.0) == pytest.approx(2 * hover_energy(PH, 100.0))


def test_accel_energy_golden(golden):
    assert accel_energy(PH) == pytest.approx(golden["uav"]["accel_energy"], abs=1e-6)


def _simpson(f, a, b, n):
    x = np.linspace(a, b, n + 1)
    y = f(x)
    return (b - a) / (3 * n) * (y[0] + y[-1] + 4 * y[1:-1:2].sum() + 2 * y[2:-1:2].sum())


def test_accel_energy_against_simpson_refinement():
    f = lambda t: propulsion_power(PH, PH.a * t)
    coarse, fine = _simpson(f, 0, 10, 512), _simpson(f, 0, 10, 1024)
    assert abs(fine - coarse) / fine < 1e-6
    assert accel_energy(PH) == pytest.approx(fine, rel=1e-7)


def test_instant_acceleration_costs_nothing():
    fast = UavPhysics(**{**PH.__dict__, "a": 1e9})
    assert accel_energy(fast) == pytest.approx(0.0, abs=1e-6)


def test_flight_timing():
    E_leg, T_fly, T_fly_V = round_trip_leg(PH, 600.0)
    assert (T_fly, T_fly_V) == (70.0, 50.0)
    assert propulsion_power(PH, 10.0) * T_fly_V == pytest.approx(2.03e3, rel=1e-3)
    assert E_leg == pytest.approx(2 * accel_energy(PH) + propulsion_power(PH, 10.0) * 50.0)


def test_shortest_feasible_leg():
    E_leg, _, T_fly_V = round_trip_leg(PH, 100.0)
    assert T_fly_V == 0.0
    assert E_leg == pytest.approx(2 * accel_energy(PH))
    with pytest.raises(GeometryError):
        round_trip_leg(PH, 99.0)


def test_zero_mission():
    e = total_uav_energy(PH, 10.0, 0.0, 0.0, 0.0, 0.0)
    assert e.total == 0.0


def test_hybrid_csi_free_mission():
    e = total_uav_energy(PH, 10.0, 89.46, 683.93, 126.87, 600.0)
    assert e.total == pytest.approx(56.45e3, rel=0.05)
    d = e.as_dict()
    assert d["E_s"] == sum(v for k, v in d.items() if k != "E_s")


@given(st.floats(0.0, 80.0))
def test_power_positive(V):
    assert propulsion_power(PH, V) > 0


def test_power_continuous():
    V = np.linspace(0, 80, 80001)
    assert np.max(np.abs(np.diff(propulsion_power(PH, V)))) < 0.1


@given(st.floats(0, 1e3), st.floats(0, 1e3), st.floats(0, 1e3), st.floats(0, 100), st.integers(0, 2))
def test_mission_energy_monotone(t2, t3, t4, dt, which):
    base = [t2, t3, t4]
    more = list(base)
    more[which] += dt
    a = total_uav_energy(PH, 10.0, *base, 600.0).total
    b = total_uav_energy(PH, 10.0, *more, 600.0).total
    assert b >= a


def test_invalid_physics():
    with pytest.raises(ValueError):
        UavPhysics(V=100.0)
    with pytest.raises(ValueError):
        UavPhysics(rho=0.0)
    with pytest.raises(ValueError):
        propulsion_power(PH, -1.0)
