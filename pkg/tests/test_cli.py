import csv
import json
import shutil
import subprocess

import pytest

from wpucn.cli import main

SMALL = '{"num_uds_N": 8}'


@pytest.fixture
def config(tmp_path):
    path = tmp_path / "small.json"
    path.write_text(SMALL)
    return str(path)


def test_channel_report(config, tmp_path):
    out = tmp_path / "report.json"
    assert main(["channel-report", "--config", config, "--trials", "4", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["uav_receive_power_w"] == pytest.approx(655.235, rel=1e-5)
    assert set(report["downlink_loss_db"]) == {"hap", "uav"}


def test_wet_sweep_csv(config, tmp_path):
    out = tmp_path / "sweep.csv"
    args = ["wet-sweep", "--config", config, "--axis", "vwc", "--values", "0.1,0.4",
            "--rows", "ps:AASS_II,hybrid:AASS_II+RAB", "--trials", "3", "--seed", "4", "--out", str(out)]
    assert main(args) == 0
    first = out.read_text()
    rows = list(csv.DictReader(first.splitlines()))
    assert [r["value"] for r in rows] == ["0.1", "0.1", "0.4", "0.4"]
    assert main(args) == 0
    assert out.read_text() == first


def test_allocate_json(config, tmp_path):
    out = tmp_path / "plan.json"
    args = ["allocate", "--config", config, "--approach", "hybrid", "--scheme-hap", "aass-ii",
            "--scheme-uav", "rab", "--gamma", "25e6", "--trials", "4", "--out", str(out)]
    assert main(args) == 0
    record = json.loads(out.read_text())
    assert record["gamma_bits"] == 25e6
    assert len(record["tau"]) == 8
    assert record["energy"]["E_s"] == pytest.approx(record["plan"]["E_s"])
    assert record["plan"]["kkt_residual"] <= 1e-6 * 25e6


def test_table3_csv(config, tmp_path):
    out = tmp_path / "table.csv"
    assert main(["table3", "--config", config, "--trials", "2", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.read_text().splitlines()))
    assert len(rows) == 6 and rows[-1]["row"] == "Hybrid (CSI-free)"


def test_config_errors_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"num_uds_N": -3}')
    assert main(["allocate", "--config", str(bad)]) == 2
    assert "num_uds_N" in capsys.readouterr().err
    assert main(["channel-report", "--config", str(tmp_path / "missing.json")]) == 2
    assert main(["wet-sweep", "--values", "0.4,0.2", "--axis", "vwc"]) == 2
    assert main(["wet-sweep", "--rows", "sat:SA"]) == 2


def test_validate_passes(tmp_path):
    out = tmp_path / "report.txt"
    assert main(["validate", "--filter", "soil", "--out", str(out)]) == 0
    assert "FAIL" not in out.read_text()


def test_perturbed_golden_is_named(tmp_path, golden):
    golden = json.loads(json.dumps(golden))
    golden["uav"]["P_10"] *= 1.01
    path = tmp_path / "golden.json"
    path.write_text(json.dumps(golden))
    out = tmp_path / "report.txt"
    assert main(["validate", "--golden", str(path), "--out", str(out)]) == 1
    failing = [line for line in out.read_text().splitlines() if "FAIL" in line]
    assert failing and all("uav" in line for line in failing)


@pytest.mark.skipif(shutil.which("wpucn") is None, reason="console script not installed")
def test_console_script_exit_codes(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{oops")
    assert subprocess.run(["wpucn", "table3", "--config", str(bad)], capture_output=True).returncode == 2
    done = subprocess.run(["wpucn", "validate", "--filter", "link"], capture_output=True, text=True)
    assert done.returncode == 0, done.stdout
