"""Mission energy as the per-UD data target grows.

Run: python demos/04_energy_vs_throughput.py
"""
from wpucn.allocation import WetApproach
from wpucn.deployment import Deployment
from wpucn.harness import run_energy_sweep
from wpucn.scenario import Scenario
from wpucn.wet import Scheme

sc = Scenario()
rows = (
    ("PS", WetApproach("ps", Scheme.AASS_II)),
    ("UAV", WetApproach("uav", uav_scheme=Scheme.RAB)),
    ("Hybrid", WetApproach("hybrid", Scheme.AASS_II, Scheme.RAB)),
)
gammas = (12.5e6, 25e6, 50e6, 100e6, 125e6)
out = run_energy_sweep(sc, gammas, seed=0, draws=100, rows=rows, deployment=Deployment(sc, 0))
E = {(r["gamma"], r["row"]): r["E_s"] / 1e3 for r in out}

print(f"{'Mbit':>6} " + "".join(f"{name:>9}" for name, _ in rows) + "   hybrid saving vs PS / UAV")
for g in gammas:
    ps, uav, hyb = (E[(g, name)] for name, _ in rows)
    print(f"{g / 1e6:6.1f} {ps:9.2f} {uav:9.2f} {hyb:9.2f}   {100 * (1 - hyb / ps):5.2f}% / {100 * (1 - hyb / uav):5.2f}%")
