"""One mission, end to end: charge the UAV, fly out, charge UDs, collect, return.

Run: python demos/03_mission_plan.py
"""
from wpucn import WetApproach, plan
from wpucn.deployment import Deployment
from wpucn.scenario import Scenario
from wpucn.wet import Scheme

sc = Scenario()
dep = Deployment(sc, seed=0)   # shared so every approach sees the same UDs and fading

approaches = {
    "HAP only, AASS-II": WetApproach("ps", Scheme.AASS_II),
    "UAV only, RAB": WetApproach("uav", uav_scheme=Scheme.RAB),
    "HAP AASS-II + UAV RAB": WetApproach("hybrid", Scheme.AASS_II, Scheme.RAB),
}
print(f"{'approach':24} {'T_p1':>7} {'T_p2':>7} {'T_p3':>7} {'T_p4':>7} {'total':>8} {'E_s kJ':>7}")
for name, approach in approaches.items():
    p = plan(sc, approach, deployment=dep, draws=100)
    print(f"{name:24} {p.T_p1:7.1f} {p.T_p2:7.1f} {p.T_p3:7.1f} {p.T_p4:7.1f} {p.T_total:8.1f} {p.E_s / 1e3:7.2f}")

# Where does the hybrid mission's energy go?
p = plan(sc, approaches["HAP AASS-II + UAV RAB"], deployment=dep, draws=100)
print("\nhybrid energy breakdown (kJ)")
for key, value in p.energy.as_dict().items():
    print(f"  {key:7} {value / 1e3:8.3f}")

# The UDs far from the HAP need the longest uplink slots.
far = p.tau.argmax()
print(f"\nlongest slot {p.tau.max():.1f} s for UD {far} at {dep.positions[far, :2].round(2)} m; "
      f"shortest {p.tau.min():.1f} s; every UD delivers {p.gamma[0] / 1e6:.1f} Mbit "
      f"(max deviation {p.kkt_residual:.2e} bit)")
