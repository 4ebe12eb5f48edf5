import numpy as np
import pytest
from hypothesis import given, strategies as st

from wpucn.link import LinkBudget, offload_time, uav_receive_power, ud_throughput
from wpucn.scenario import Scenario

SC = Scenario()


def test_receive_power_hand_value(golden):
    assert uav_receive_power(SC) == pytest.approx(golden["link"]["uav_receive_power"], rel=1e-12)
    assert uav_receive_power(SC) == pytest.approx(0.6 * 3597.5 * 31.62 * 3.162 / 329.0, rel=2e-3)


def test_no_conversion_no_power():
    assert uav_receive_power(SC.replace(energy_conv_zeta=0.0)) == 0.0


def test_offload_time(golden):
    bits = 64 * 12.5e6
    assert offload_time(bits, SC) == pytest.approx(golden["link"]["offload_time_64x12.5Mbit"], rel=1e-12)
    assert offload_time(bits, SC) == pytest.approx(126.87, rel=0.01)
    assert offload_time(0.0, SC) == 0.0


@given(st.floats(0, 1e12), st.floats(0, 1e12))
def test_offload_time_is_linear(a, b):
    assert offload_time(a + b, SC) == pytest.approx(offload_time(a, SC) + offload_time(b, SC), rel=1e-12)


def test_snr_uses_unit_small_scale_gain():
    lb = LinkBudget.from_scenario(SC)
    assert lb.h_0 == 1.0
    assert lb.snr(10.0) == pytest.approx(10.0 * lb.hap_uav_gain_product / (lb.fspl_hap_uav * SC.noise_var))
    with pytest.raises(ValueError):
        LinkBudget(1.0, 1.0, 1.0, h_0=0.5)


ARGS = dict(uplink_loss=5e4, G_ud=10 ** 0.215, G_uav=10 ** 0.5, phi=0.6, W=125e3, noise_var=10 ** -14.7)


def test_no_energy_no_bits():
    assert ud_throughput(10.0, 0.0, **ARGS) == 0.0


@given(st.floats(1e-3, 1e4), st.floats(1e-9, 1e-2))
def test_concave_in_slot_length(tau, E):
    r1, r2 = ud_throughput(tau, E, **ARGS), ud_throughput(2 * tau, E, **ARGS)
    assert r1 < r2 < 2 * r1


def test_throughput_rejects_bad_inputs():
    with pytest.raises(ValueError):
        ud_throughput(0.0, 1.0, **ARGS)
    with pytest.raises(ValueError):
        ud_throughput(1.0, -1.0, **ARGS)


def test_vectorized_throughput():
    out = ud_throughput(np.array([1.0, 2.0]), np.array([1e-3, 1e-3]), **ARGS)
    assert out.shape == (2,)
    assert out[0] == pytest.approx(ud_throughput(1.0, 1e-3, **ARGS))
