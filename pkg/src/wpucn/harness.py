"""Monte Carlo experiment driver: WET sweeps, allocation tables, energy sweeps.

Trials are seeded per ``(seed, cell, trial)``, where a cell is one value of the
swept axis. All approach/scheme rows of a cell therefore see the same
placements and fading, and the worker count never changes results.

The worst-case metric is time-free: it is the incident power at the
EH-circuit input, so the charging time context of the sweep does not enter.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .allocation import ApproachKind, WetApproach, plan
from .deployment import Deployment
from .scenario import Scenario
from .wet import BudgetExhaustedError, Scheme

__all__ = [
    "AXES",
    "SweepSpec",
    "MetricRow",
    "worst_case_metric",
    "trial_minima",
    "run_wet_sweep",
    "sweep_to_csv",
    "TABLE_ROWS",
    "run_allocation_table",
    "run_energy_sweep",
    "CSV_COLUMNS",
]

AXES = {
    "num_antennas": "num_antennas_Q",
    "distance": "d_fly",
    "num_uds": "num_uds_N",
    "burial_depth": "burial_depth_du",
    "vwc": "vwc_mv",
    "gamma": "throughput_gamma",
}

CSV_COLUMNS = ("axis", "value", "approach", "scheme", "avg_worst_case_dbm", "std_err", "trials", "seed")

CSI_FREE_HYBRID = WetApproach(ApproachKind.HYBRID, Scheme.AASS_II, Scheme.RAB)
FULL_CSI_HYBRID = WetApproach(ApproachKind.HYBRID, Scheme.FULL_CSI, Scheme.FULL_CSI)


def scheme_label(approach: WetApproach) -> str:
    return "+".join(s.value for _, s in approach.sources())


@dataclass(frozen=True)
class SweepSpec:
    """One figure-style sweep: an axis, its values and the rows to evaluate."""

    axis: str
    values: tuple
    approaches: tuple
    trials: int = 500
    base: Scenario = field(default_factory=Scenario)
    seed: int = 0

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"unknown axis {self.axis!r}; choose from {sorted(AXES)}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        values = tuple(self.values)
        if not values:
            raise ValueError("sweep needs at least one axis value")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("axis values must be strictly increasing")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "approaches", tuple(self.approaches))

    def scenario_at(self, value) -> Scenario:
        return self.base.replace(**{AXES[self.axis]: value})


@dataclass(frozen=True)
class MetricRow:
    axis: str
    value: float
    approach: str
    scheme: str
    avg_worst_case_dbm: float
    std_err: float
    trials: int
    seed: int

    def as_csv_row(self) -> list:
        return [self.axis, _fmt(self.value), self.approach, self.scheme,
                _fmt(self.avg_worst_case_dbm), _fmt(self.std_err), self.trials, self.seed]


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def worst_case_metric(minima) -> tuple[float, float]:
    """Average of per-trial worst-case EH-input powers, in dBm.

    ``minima`` holds one value per trial in watts. Averaging is linear; the
    returned standard error (dB) follows from the delta method.
    """
    m = np.asarray(minima, dtype=float).ravel()
    if m.size == 0:
        raise ValueError("need at least one trial")
    mean = m.mean()
    if mean <= 0:
        return -math.inf, math.nan
    dbm = 10.0 * np.log10(mean * 1e3)
    if m.size < 2:
        return float(dbm), 0.0
    se = m.std(ddof=1) / np.sqrt(m.size)
    return float(dbm), float(10.0 / np.log(10.0) * se / mean)


def trial_minima(scenario: Scenario, approach: WetApproach, trial_seed: int,
                 deployment: Deployment | None = None) -> float:
    """``min_n`` of the EH-input power for one placement and one fading draw."""
    dep = deployment or Deployment(scenario, trial_seed)
    total = np.zeros(dep.N)
    for ps, scheme in approach.sources():
        total += dep.eh_gain(ps) * dep.incident_draws(ps, scheme, 1)[0]
    return float(total.min())


def _trial_seed(seed: int, cell: int, trial: int) -> int:
    ss = np.random.SeedSequence([int(seed), int(cell), int(trial)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def run_wet_sweep(sweep: SweepSpec) -> list[MetricRow]:
    """Evaluate every approach at every axis value over ``sweep.trials`` trials.

    A row whose power budget is exhausted is reported with NaN metrics and
    zero trials.
    """
    rows = []
    for cell, value in enumerate(sweep.values):
        sc = sweep.scenario_at(value)
        minima = {i: [] for i in range(len(sweep.approaches))}
        failed = {}
        for trial in range(sweep.trials):
            dep = Deployment(sc, _trial_seed(sweep.seed, cell, trial))
            for i, approach in enumerate(sweep.approaches):
                if i in failed:
                    continue
                try:
                    minima[i].append(trial_minima(sc, approach, 0, dep))
                except BudgetExhaustedError as exc:
                    failed[i] = str(exc)
        for i, approach in enumerate(sweep.approaches):
            label = (approach.kind.value, scheme_label(approach))
            if i in failed:
                rows.append(MetricRow(sweep.axis, value, *label, math.nan, math.nan, 0, sweep.seed))
                continue
            dbm, se = worst_case_metric(minima[i])
            rows.append(MetricRow(sweep.axis, value, *label, dbm, se, sweep.trials, sweep.seed))
    return rows


def sweep_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.as_csv_row())
    return buf.getvalue()


TABLE_ROWS = (
    ("PS (Full-CSI)", WetApproach(ApproachKind.TRADITIONAL_PS, Scheme.FULL_CSI, Scheme.RAB)),
    ("PS (AASS-II)", WetApproach(ApproachKind.TRADITIONAL_PS, Scheme.AASS_II, Scheme.RAB)),
    ("UAV (Full-CSI)", WetApproach(ApproachKind.UAV_WET, Scheme.AASS_II, Scheme.FULL_CSI)),
    ("UAV (RAB)", WetApproach(ApproachKind.UAV_WET, Scheme.AASS_II, Scheme.RAB)),
    ("Hybrid (Full-CSI)", FULL_CSI_HYBRID),
    ("Hybrid (CSI-free)", CSI_FREE_HYBRID),
)


def run_allocation_table(scenario: Scenario, gamma=None, seed: int = 0,
                         draws: int | None = None, rows=TABLE_ROWS,
                         deployment: Deployment | None = None) -> list[dict]:
    """Time allocation and mission energy of each approach on one shared deployment."""
    dep = deployment or Deployment(scenario, seed)
    out = []
    for name, approach in rows:
        p = plan(scenario, approach, seed, draws=draws, gamma=gamma, deployment=dep)
        out.append({"row": name, **p.summary(), "E_s_kJ": p.E_s / 1e3})
    return out


def run_energy_sweep(scenario: Scenario, gammas, seed: int = 0, draws: int | None = None,
                     rows=TABLE_ROWS, deployment: Deployment | None = None) -> list[dict]:
    """Mission energy against the per-UD throughput target, on one deployment."""
    dep = deployment or Deployment(scenario, seed)
    out = []
    for gamma in gammas:
        for name, approach in rows:
            p = plan(scenario, approach, seed, draws=draws, gamma=gamma, deployment=dep)
            out.append({"gamma": float(gamma), "row": name, "E_s": p.E_s, "T_total": p.T_total,
                        "kkt_residual": p.kkt_residual})
    return out
