"""Python smoke tests: the bound module and the CLI binary."""

import json
import math
import os
import subprocess
import sys
from pathlib import Path

import pytest

import qkdenum

CLI = os.environ.get("QKDENUM_CLI")
BASELINE = os.environ.get("QKDENUM_BASELINE")


def test_metrics_on_baseline():
    m = qkdenum.metrics(qkdenum.baseline_scenario())
    assert m.rho_e_sd == pytest.approx(11.82, rel=5e-3)
    assert m.rho_y_sd == pytest.approx(6.13, rel=5e-3)
    assert m.r_k == pytest.approx(6.08e-5, rel=5e-3)


def test_validation_reports_messages():
    s = qkdenum.baseline_scenario()
    s.receiver.eta_pd = 0.0
    messages = qkdenum.validate(s)
    assert any("eta_pd must be in (0,1]" in msg for msg in messages)


def test_undefined_ratios_are_none():
    s = qkdenum.baseline_scenario()
    s.source.lambda_d = 0.0
    m = qkdenum.metrics(s)
    assert m.rho_e_sd is None
    assert m.rho_y_sd is None


def test_scenario_json_round_trip():
    s = qkdenum.baseline_scenario()
    text = qkdenum.scenario_to_json(s)
    back = qkdenum.scenario_from_json(text)
    assert qkdenum.scenario_digest(back) == qkdenum.scenario_digest(s)


def test_photon_stats():
    profile = qkdenum.emission_profile(0.5, 4)
    assert sum(profile.probs) + profile.tail == pytest.approx(1.0, abs=1e-12)
    assert profile.probs[1] == pytest.approx(0.3033, abs=5e-5)
    seg = qkdenum.fiber_segment(0.2, 50.0)
    assert seg.rho == pytest.approx(10.0)
    assert qkdenum.solve_photon_loss_prob(100.0, 10.0) == pytest.approx(0.9, abs=1e-9)


def test_simulate_and_compare():
    s = qkdenum.baseline_scenario()
    s.source.m_s = 20000
    s.source.m_d = 10000
    s.source.m_v = 100
    options = qkdenum.McOptions()
    options.seed = 11
    options.slots_scale = 50
    tally = qkdenum.simulate_one(s, options, 0)
    report = qkdenum.compare(qkdenum.enumerate_scenario(s), tally)
    assert report.all_pass
    again = qkdenum.simulate_one(s, options, 0)
    assert again.signal.optical_total == tally.signal.optical_total
    assert again.sifted_signal_bits == tally.sifted_signal_bits


def test_sweep_and_selection():
    rows = qkdenum.sweep(qkdenum.baseline_scenario(), qkdenum.SweepAxis.lambda_d,
                         qkdenum.default_decoy_grid())
    assert [row.axis_value for row in rows] == qkdenum.default_decoy_grid()
    rks = {row.metrics.r_k for row in rows}
    assert len(rks) == 1

    report = qkdenum.select_decoy_mean(qkdenum.baseline_scenario(),
                                       qkdenum.DesignConstraints(2.0, 12.0),
                                       qkdenum.default_decoy_grid())
    assert report.feasible
    assert report.recommended == pytest.approx(0.2)


@pytest.mark.skipif(CLI is None or BASELINE is None, reason="CLI paths not provided")
class TestCli:
    def run(self, *args, expect=0):
        result = subprocess.run([CLI, *args], capture_output=True, text=True)
        assert result.returncode == expect, result.stdout + result.stderr
        return result

    def test_evaluate(self):
        result = self.run("evaluate", "--scenario", BASELINE)
        assert "rho_e_sd = 11.82" in result.stdout
        assert "rho_y_sd = 6.13" in result.stdout
        assert "R_k = 6.08e-05" in result.stdout

    def test_tables(self, tmp_path):
        out = tmp_path / "tables"
        self.run("tables", "--scenario", BASELINE, "--out", str(out))
        table4 = (out / "table4.csv").read_bytes()
        assert b"0.20,11.82,6.13,6.08e-05\r\n" in table4
        assert (out / "table1.csv").exists()
        assert (out / "table2.csv").exists()
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["subcommand"] == "tables"
        assert len(manifest["scenario_digest"]) == 16

    def test_sweep_byte_identical(self, tmp_path):
        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        args = ("sweep", "--scenario", BASELINE, "--axis", "l_total",
                "--values", "30,50,100", "--svg")
        self.run(*args, "--out", str(out_a))
        self.run(*args, "--out", str(out_b))
        assert (out_a / "sweep.csv").read_bytes() == (out_b / "sweep.csv").read_bytes()
        assert (out_a / "rk.svg").read_bytes() == (out_b / "rk.svg").read_bytes()
        header = (out_a / "sweep.csv").read_text().splitlines()[0]
        assert header == "lambda_s,lambda_d,l_total,rho_e_sd,rho_y_sd,R_k,y_bs,y_bd"

    def test_simulate_small(self, tmp_path):
        scenario = dict(json.loads(Path(BASELINE).read_text()))
        scenario["source"]["m_s"] = 20000
        scenario["source"]["m_d"] = 10000
        scenario["source"]["m_v"] = 100
        scenario_path = tmp_path / "small.json"
        scenario_path.write_text(json.dumps(scenario))
        out = tmp_path / "sim"
        result = self.run("simulate", "--scenario", str(scenario_path), "--seed", "4",
                          "--replications", "3", "--scale", "20", "--out", str(out))
        assert "3/3 replications pass" in result.stdout
        agreement = (out / "agreement.csv").read_text()
        assert agreement.startswith("replication,counter,expected,observed,z,pass")
        tally = json.loads((out / "tally.json").read_text())
        assert len(tally) == 3

    def test_design_exit_codes(self, tmp_path):
        result = self.run("design", "--scenario", BASELINE)
        assert "recommended lambda_d = 0.2" in result.stdout
        self.run("design", "--scenario", BASELINE, "--max-eve-ratio", "1.5", expect=2)

    def test_validation_exit_code(self, tmp_path):
        bad = dict(json.loads(Path(BASELINE).read_text()))
        bad["receiver"]["eta_pd"] = 0.0
        bad["link"]["eve_fraction"] = 1.0
        bad_path = tmp_path / "bad.json"
        bad_path.write_text(json.dumps(bad))
        result = self.run("evaluate", "--scenario", str(bad_path), expect=1)
        assert "eta_pd must be in (0,1]" in result.stderr
        assert "eve_fraction must be in (0,1)" in result.stderr

        unknown_key = dict(json.loads(Path(BASELINE).read_text()))
        unknown_key["dark_rate"] = 1e-6
        unknown_path = tmp_path / "unknown.json"
        unknown_path.write_text(json.dumps(unknown_key))
        result = self.run("evaluate", "--scenario", str(unknown_path), expect=1)
        assert "unknown key" in result.stderr

    def test_unknown_flag(self):
        self.run("evaluate", "--scenario", BASELINE, "--no-such-flag", expect=1)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
