"""How wet and how deep: the two soil knobs that dominate the downlink budget.

Run: python demos/01_soil_and_path_loss.py
"""
import numpy as np

from wpucn.propagation import attenuation_constants, total_downlink_loss
from wpucn.scenario import Scenario, compute_geometry, linear_to_db
from wpucn.soil import medium_for

base = Scenario()

# A UD straight below the hovering UAV isolates the soil terms: the air gap is
# just the hover height, so the air loss stays fixed at about 40 dB.
print("water content sweep at 0.4 m burial")
print(f"{'m_v':>5} {'eps_r':>7} {'eps_i':>7} {'alpha Np/m':>11} {'air dB':>7} {'K dB':>6} {'M dB':>6} {'total dB':>9}")
for mv in (0.05, 0.1, 0.15, 0.2, 0.3, 0.4):
    sc = base.replace(vwc_mv=mv)
    medium = medium_for(sc)
    alpha, _ = attenuation_constants(medium, sc.carrier_f)
    geo = compute_geometry(sc, [0.0, 0.0, -sc.burial_depth_du])
    db = total_downlink_loss(geo, medium, sc.pathloss_exp_v2u, sc.carrier_f).as_db()
    print(f"{mv:5.2f} {medium.eps_real:7.2f} {medium.eps_imag:7.2f} {alpha:11.3f} {db['air_J_db']:7.2f} "
          f"{db['refraction_K_a2u_db']:6.2f} {db['soil_M_db']:6.2f} {db['total_delta_db']:9.2f}")

# Depth enters twice: through the exponential attenuation and through the
# (2 beta d)^2 spreading term. The second is why even very dry soil costs
# several dB per doubling of depth.
print("\nburial depth sweep at m_v = 0.15")
ref = None
for d in (0.2, 0.4, 0.6, 0.8, 1.0):
    sc = base.replace(burial_depth_du=d)
    geo = compute_geometry(sc, [0.0, 0.0, -d])
    total = float(linear_to_db(total_downlink_loss(geo, medium_for(sc), 2.0, sc.carrier_f).total_delta))
    ref = total if ref is None else ref
    print(f"  d_u = {d:.1f} m: {total:7.2f} dB  (+{total - ref:5.2f} dB vs 0.2 m)")

# The HAP sits 600 m away, so its air loss dwarfs the UAV's; the soil part is
# the same for both sources.
sc = base
geo = compute_geometry(sc, np.array([[0.0, 0.0, -0.4]]))
hap = total_downlink_loss(geo, medium_for(sc), sc.pathloss_exp_p2u, sc.carrier_f, "p2u").as_db()
uav = total_downlink_loss(geo, medium_for(sc), sc.pathloss_exp_v2u, sc.carrier_f, "v2u").as_db()
print(f"\ncentre UD: HAP link {hap['total_delta_db'][0]:.1f} dB, UAV link {uav['total_delta_db'][0]:.1f} dB")
