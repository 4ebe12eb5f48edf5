"""Command-line entry point: ``wpucn <subcommand> [options]``.

Exit codes: 0 success, 1 validation failure, 2 configuration error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from .allocation import WetApproach, plan
from .deployment import Deployment
from .harness import AXES, SweepSpec, run_allocation_table, run_wet_sweep, sweep_to_csv
from .link import LinkBudget, offload_time, uav_receive_power
from .propagation import attenuation_constants, refraction_loss_a2u
from .scenario import ConfigError, Scenario, linear_to_db, load_scenario
from .soil import medium_for
from .validation import CHECKS, run_validation
from .wet import Scheme

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG = 0, 1, 2

DEFAULT_AXIS_VALUES = {
    "num_antennas": "8,16,32,64",
    "distance": "200,400,600,800,1000",
    "num_uds": "16,32,64,128",
    "burial_depth": "0.2,0.4,0.6,0.8,1.0",
    "vwc": "0.1,0.15,0.2,0.25,0.3,0.35,0.4",
    "gamma": "12.5e6,25e6,50e6,125e6",
}

DEFAULT_SWEEP_ROWS = ("ps:SA,ps:AAIS,ps:AASS_I,ps:AASS_II,"
                      "uav:SA,uav:AAIS,uav:AASS_I,uav:AASS_II,uav:RAB,hybrid:AASS_II+RAB")


def _parse_rows(text: str) -> list[WetApproach]:
    """``kind:SCHEME`` items; hybrids take ``HAP_SCHEME+UAV_SCHEME``."""
    rows = []
    for item in filter(None, (s.strip() for s in text.split(","))):
        kind, _, schemes = item.partition(":")
        if kind == "hybrid":
            hap, _, uav = schemes.partition("+")
            rows.append(WetApproach("hybrid", hap or "AASS_II", uav or "RAB"))
        elif kind == "ps":
            rows.append(WetApproach("ps", schemes or "AASS_II"))
        elif kind == "uav":
            rows.append(WetApproach("uav", uav_scheme=schemes or "RAB"))
        else:
            raise ConfigError(f"bad row {item!r}; expected ps:S, uav:S or hybrid:S1+S2")
    return rows


def _load(args) -> Scenario:
    if args.config is None:
        return Scenario()
    try:
        with open(args.config) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    return load_scenario(text)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, default=_to_builtin) + "\n"


def _to_builtin(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.generic):
        return x.item()
    raise TypeError(f"not serializable: {type(x).__name__}")


def _stats(x) -> dict:
    x = np.asarray(x, dtype=float)
    return {"min": float(x.min()), "mean": float(x.mean()), "max": float(x.max())}


def cmd_channel_report(args) -> int:
    sc = _load(args)
    dep = Deployment(sc, args.seed)
    medium = medium_for(sc)
    alpha, beta = attenuation_constants(medium, sc.carrier_f, sc.constants)
    report = {
        "soil": {"eps_real": medium.eps_real, "eps_imag": medium.eps_imag, "source": medium.source,
                 "alpha_np_per_m": alpha, "beta_rad_per_m": beta,
                 "K_a2u_db": float(linear_to_db(refraction_loss_a2u(medium)))},
        "downlink_loss_db": {ps: _stats(linear_to_db(dep.downlink_loss(ps))) for ps in ("hap", "uav")},
        "uplink_loss_db": _stats(linear_to_db(dep.uplink_loss)),
        "mean_incident_dbm": {},
        "uav_receive_power_w": uav_receive_power(sc),
        "hap_uav_snr_db": float(linear_to_db(LinkBudget.from_scenario(sc).snr(sc.p_uav))),
        "offload_time_s": offload_time(sc.num_uds_N * sc.throughput_gamma, sc),
        "seed": args.seed,
        "fading_draws": args.trials,
    }
    for ps, scheme in (("hap", Scheme.AASS_II), ("uav", Scheme.RAB)):
        xi = dep.expected_incident(ps, scheme, args.trials)
        report["mean_incident_dbm"][f"{ps}:{scheme.value}"] = _stats(linear_to_db(xi * 1e3))
    _emit(_json(report), args.out)
    return EXIT_OK


def cmd_wet_sweep(args) -> int:
    sc = _load(args)
    try:
        values = [float(v) for v in (args.values or DEFAULT_AXIS_VALUES[args.axis]).split(",")]
        if AXES[args.axis] in ("num_antennas_Q", "num_uds_N"):
            values = [int(v) for v in values]
        sweep = SweepSpec(args.axis, tuple(values), tuple(_parse_rows(args.rows)), args.trials,
                         sc, args.seed)
        for v in sweep.values:
            sweep.scenario_at(v)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    _emit(sweep_to_csv(run_wet_sweep(sweep)), args.out)
    return EXIT_OK


def cmd_allocate(args) -> int:
    sc = _load(args)
    approach = WetApproach(args.approach, args.scheme_hap, args.scheme_uav)
    p = plan(sc, approach, args.seed, draws=args.trials, gamma=args.gamma)
    record = {
        "plan": p.summary(),
        "tau": p.tau,
        "energy": p.energy.as_dict(),
        "seed": args.seed,
        "fading_draws": p.extras["draws"],
        "gamma_bits": float(p.gamma[0]) if np.all(p.gamma == p.gamma[0]) else p.gamma,
    }
    _emit(_json(record), args.out)
    return EXIT_OK


def cmd_table3(args) -> int:
    sc = _load(args)
    rows = run_allocation_table(sc, gamma=args.gamma, seed=args.seed, draws=args.trials)
    buf = io.StringIO()
    cols = ["row", "T_p1", "T_p2", "T_p3", "T_p4", "T_total", "E_s_kJ"]
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for r in rows:
        writer.writerow([r["row"]] + [f"{r[c]:.2f}" for c in cols[1:]])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_validate(args) -> int:
    report = run_validation(args.filter, args.golden)
    _emit(report.format() + "\n", args.out)
    return EXIT_OK if report.passed else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON scenario file (defaults apply to missing keys)")
    common.add_argument("--seed", type=int, default=0, metavar="N")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")

    parser = argparse.ArgumentParser(prog="wpucn", description="UAV-assisted underground WPCN simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("channel-report", parents=[common], help="soil, path-loss and link summary")
    p.add_argument("--trials", type=int, default=100, metavar="N", help="fading draws")
    p.set_defaults(func=cmd_channel_report)

    p = sub.add_parser("wet-sweep", parents=[common], help="worst-case incident power sweep (CSV)")
    p.add_argument("--trials", type=int, default=500, metavar="N", help="trials per cell")
    p.add_argument("--axis", choices=sorted(AXES), default="num_antennas")
    p.add_argument("--values", help="comma-separated, strictly increasing axis values")
    p.add_argument("--rows", default=DEFAULT_SWEEP_ROWS,
                   help="comma-separated kind:SCHEME items, e.g. ps:AASS_II,uav:RAB,hybrid:FULL_CSI+FULL_CSI")
    p.set_defaults(func=cmd_wet_sweep)

    schemes = [s.value for s in Scheme]
    p = sub.add_parser("allocate", parents=[common], help="optimal time allocation for one approach")
    p.add_argument("--trials", type=int, default=None, metavar="N", help="fading draws")
    p.add_argument("--approach", choices=["ps", "uav", "hybrid"], default="hybrid")
    p.add_argument("--scheme-hap", type=Scheme.parse, default=Scheme.AASS_II, metavar="|".join(schemes))
    p.add_argument("--scheme-uav", type=Scheme.parse, default=Scheme.RAB, metavar="|".join(schemes))
    p.add_argument("--gamma", type=float, default=None, help="bits each UD must deliver")
    p.set_defaults(func=cmd_allocate)

    p = sub.add_parser("table3", parents=[common], help="six-row approach comparison (CSV)")
    p.add_argument("--trials", type=int, default=500, metavar="N", help="fading draws")
    p.add_argument("--gamma", type=float, default=None, help="bits each UD must deliver")
    p.set_defaults(func=cmd_table3)

    p = sub.add_parser("validate", parents=[common], help="run the built-in reference checks")
    p.add_argument("--trials", type=int, default=None, metavar="N", help="unused; accepted for symmetry")
    p.add_argument("--filter", choices=sorted({m for m, _, _ in CHECKS}))
    p.add_argument("--golden", metavar="PATH", help="alternative reference file")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
