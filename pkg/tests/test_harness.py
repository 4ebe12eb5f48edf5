import csv
import io
import math

import numpy as np
import pytest

from wpucn.allocation import WetApproach
from wpucn.harness import (CSV_COLUMNS, CSI_FREE_HYBRID, SweepSpec, run_allocation_table,
                           run_energy_sweep, run_wet_sweep, sweep_to_csv, worst_case_metric)
from wpucn.scenario import Scenario
from wpucn.wet import Scheme

SMALL = Scenario(num_uds_N=16)


def test_single_milliwatt_is_zero_dbm():
    dbm, se = worst_case_metric([1e-3])
    assert dbm == pytest.approx(0.0, abs=1e-12) and se == 0.0


def test_average_is_linear():
    assert worst_case_metric([1e-3, 3e-3])[0] == pytest.approx(10 * math.log10(2), abs=1e-12)


def test_all_zero_trials():
    dbm, se = worst_case_metric([0.0, 0.0])
    assert dbm == -math.inf and math.isnan(se)
    with pytest.raises(ValueError):
        worst_case_metric([])


def test_sweep_definition_validation():
    with pytest.raises(ValueError):
        SweepSpec("depth", (0.2,), (CSI_FREE_HYBRID,))
    with pytest.raises(ValueError):
        SweepSpec("burial_depth", (0.4, 0.2), (CSI_FREE_HYBRID,))
    with pytest.raises(ValueError):
        SweepSpec("burial_depth", (0.4,), (CSI_FREE_HYBRID,), trials=0)
    assert SweepSpec("vwc", (0.2,), ()).scenario_at(0.3).vwc_mv == 0.3


ROWS = (WetApproach("ps", Scheme.AASS_II), WetApproach("uav", uav_scheme=Scheme.RAB), CSI_FREE_HYBRID)


def test_csv_is_byte_identical_across_runs():
    sweep = SweepSpec("burial_depth", (0.2, 0.6), ROWS, trials=6, base=SMALL, seed=9)
    a, b = sweep_to_csv(run_wet_sweep(sweep)), sweep_to_csv(run_wet_sweep(sweep))
    assert a == b
    rows = list(csv.reader(io.StringIO(a)))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 1 + 2 * len(ROWS)
    other = sweep_to_csv(run_wet_sweep(SweepSpec("burial_depth", (0.2, 0.6), ROWS, 6, SMALL, 10)))
    assert other != a


def test_hybrid_collects_from_both_sources():
    sweep = SweepSpec("vwc", (0.15,), ROWS, trials=8, base=SMALL, seed=1)
    ps, uav, hyb = (r.avg_worst_case_dbm for r in run_wet_sweep(sweep))
    assert hyb > max(ps, uav)


def test_standard_error_shrinks_with_root_trials():
    def se(trials):
        sweep = SweepSpec("burial_depth", (0.4,), (CSI_FREE_HYBRID,), trials=trials, base=SMALL, seed=2)
        return run_wet_sweep(sweep)[0].std_err

    ratio = se(50) / se(200)
    assert ratio == pytest.approx(2.0, rel=0.2)


def test_exhausted_budget_yields_labeled_missing_cell():
    base = SMALL.replace(p_uav_dbw=0.0)
    sweep = SweepSpec("num_antennas", (8, 32), (WetApproach("uav", uav_scheme=Scheme.AAIS),), 3, base)
    ok, missing = run_wet_sweep(sweep)
    assert np.isfinite(ok.avg_worst_case_dbm) and ok.trials == 3
    assert math.isnan(missing.avg_worst_case_dbm) and missing.trials == 0
    assert "nan" in sweep_to_csv([missing])


def test_allocation_table_rows_share_offload_time():
    rows = ((n, a) for n, a in
            (("PS", WetApproach("ps")), ("UAV", WetApproach("uav")), ("Hybrid", CSI_FREE_HYBRID)))
    table = run_allocation_table(SMALL, seed=0, draws=8, rows=tuple(rows))
    assert [r["row"] for r in table] == ["PS", "UAV", "Hybrid"]
    t4 = [r["T_p4"] for r in table]
    assert max(t4) - min(t4) <= 1e-9 * max(t4)
    assert table[2]["E_s"] < min(table[0]["E_s"], table[1]["E_s"])


def test_energy_sweep_grows_with_throughput():
    rows = (("Hybrid", CSI_FREE_HYBRID),)
    out = run_energy_sweep(SMALL, [12.5e6, 25e6, 50e6], seed=0, draws=8, rows=rows)
    energies = [r["E_s"] for r in out]
    assert energies == sorted(energies)
    assert all(r["kkt_residual"] <= 1e-6 * r["gamma"] for r in out)
