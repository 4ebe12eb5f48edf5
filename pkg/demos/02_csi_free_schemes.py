"""Which CSI-free scheme should each power source run?

The HAP sees the whole monitoring disk near its array endfire, so a beam that
points there (AASS-II) beats spreading power around. The UAV hovers overhead,
with UDs in every direction, so spinning the array (RAB) pays off until the
servo eats too much of its small power budget.

Run: python demos/02_csi_free_schemes.py [trials]
"""
import sys

from wpucn.allocation import WetApproach
from wpucn.harness import SweepSpec, run_wet_sweep
from wpucn.scenario import Scenario
from wpucn.wet import Scheme

trials = int(sys.argv[1]) if len(sys.argv) > 1 else 60
schemes = (Scheme.SA, Scheme.AAIS, Scheme.AASS_I, Scheme.AASS_II, Scheme.RAB)
rows = tuple(WetApproach("ps", s) for s in schemes) + tuple(WetApproach("uav", uav_scheme=s) for s in schemes)
Qs = (8, 16, 32, 64)
out = run_wet_sweep(SweepSpec("num_antennas", Qs, rows, trials=trials, base=Scenario(), seed=1))
metric = {(r.approach, r.scheme, int(r.value)): r.avg_worst_case_dbm for r in out}

for source in ("ps", "uav"):
    print(f"\n{'HAP' if source == 'ps' else 'UAV'} as the only power source: average worst-case dBm "
          f"({trials} trials)")
    print("scheme   " + "".join(f"{'Q=' + str(Q):>9}" for Q in Qs))
    for s in schemes:
        print(f"{s.value:8} " + "".join(f"{metric[(source, s.value, Q)]:9.2f}" for Q in Qs))
