import json
import math
import os

import pytest
import yaml

from qwmix.cli import main
from qwmix.config import ConfigError, load_config, parse_config
from qwmix.runner import run_scenario

CLASSICAL = {
    "atom": {"levels": 2, "gamma1_over_2pi_mhz": 20.0},
    "sequence": {"preset": "classical", "omega_rabi_over_2pi_mhz": 50.0,
                 "dt_ns": 2.0, "t_r_ns": 100.0, "d_omega_over_gamma1": 0.05},
    "spectrum": {"method": "phase_grid", "grid_size": 16, "max_mode": 5},
    "output": {"directory": "out", "formats": ["csv", "json"]},
}


def write_config(tmp_path, doc, name="scenario.yaml"):
    path = tmp_path / name
    path.write_text(yaml.safe_dump(doc))
    return str(path)


def test_parse_classical_defaults():
    cfg = parse_config(CLASSICAL)
    assert cfg.atom.levels == 2
    assert cfg.atom.gamma1 == pytest.approx(2 * math.pi * 20e6)
    assert cfg.sequence.detuning == pytest.approx(2 * math.pi * 20e6 * 0.05)
    assert cfg.preset == "classical"
    assert cfg.spectrum.grid_size == 16
    assert cfg.sweep is None


def test_parse_quantum_and_units():
    doc = {
        "atom": {"levels": 3, "mu_ef": 1.2},
        "sequence": {"preset": "quantum", "omega1_over_2pi_mhz": 100.0,
                     "omega2_over_2pi_mhz": 120.0, "dt1_ns": 2.0, "dt2_ns": 2.0,
                     "first_tone": -1, "d_omega_over_2pi_khz": 10.0},
    }
    cfg = parse_config(doc)
    assert cfg.atom.transition_elements == (1.0, 1.2)
    assert cfg.sequence.detuning == pytest.approx(2 * math.pi * 10e3)
    driven = cfg.sequence.driven_segments()
    assert driven[0].tones[0].rabi_amplitude == pytest.approx(2 * math.pi * 100e6)


@pytest.mark.parametrize("mutate,path_fragment", [
    (lambda d: d["atom"].update(levels=5), "atom.levels"),
    (lambda d: d["atom"].update(bogus=1), "atom.bogus"),
    (lambda d: d["sequence"].update(preset="wild"), "sequence.preset"),
    (lambda d: d["sequence"].update(omega_rabi_over_2pi_mhz="fast"),
     "omega_rabi_over_2pi_mhz"),
    (lambda d: d["sequence"].update(dt_ns=300.0), "sequence"),
    (lambda d: d["spectrum"].update(method="fft"), "spectrum.method"),
    (lambda d: d["spectrum"].update(grid_size=4), "spectrum.grid_size"),
    (lambda d: d["spectrum"].update(threshold=2.0), "spectrum.threshold"),
    (lambda d: d["output"].update(formats=["xml"]), "output.formats"),
    (lambda d: d.update(sweep={"parameter": "omega1_over_2pi_mhz",
                               "values": [1.0]}), "sweep.parameter"),
    (lambda d: d.update(sweep={"parameter": "omega_rabi_over_2pi_mhz"}), "sweep"),
    (lambda d: d.update(sweep={"parameter": "omega_rabi_over_2pi_mhz",
                               "values": []}), "sweep.values"),
])
def test_config_errors_carry_field_paths(mutate, path_fragment):
    doc = json.loads(json.dumps(CLASSICAL))
    mutate(doc)
    with pytest.raises(ConfigError) as err:
        parse_config(doc)
    assert path_fragment in str(err.value)


def test_detuning_keys_are_exclusive():
    doc = json.loads(json.dumps(CLASSICAL))
    doc["sequence"]["d_omega_over_2pi_khz"] = 10.0
    with pytest.raises(ConfigError):
        parse_config(doc)


def test_sweep_range_expansion():
    doc = json.loads(json.dumps(CLASSICAL))
    doc["sweep"] = {"parameter": "omega_rabi_over_2pi_mhz",
                    "range": {"start": 0.0, "stop": 100.0, "count": 5}}
    cfg = parse_config(doc)
    assert len(cfg.sweep.values) == 5
    assert cfg.sweep.values[-1] == pytest.approx(2 * math.pi * 100e6)


def test_yaml_error_reports_location(tmp_path):
    path = tmp_path / "broken.yaml"
    path.write_text("atom: {levels: 2\n")
    with pytest.raises(ConfigError) as err:
        load_config(str(path))
    assert "line" in str(err.value)


def test_run_scenario_outputs_are_deterministic(tmp_path):
    doc = json.loads(json.dumps(CLASSICAL))
    doc["sweep"] = {"parameter": "omega_rabi_over_2pi_mhz",
                    "values": [20.0, 60.0, 120.0]}
    cfg = parse_config(doc)
    out1 = tmp_path / "run1"
    out2 = tmp_path / "run2"
    r1 = run_scenario(cfg, threads=1, out_dir=str(out1))
    r2 = run_scenario(cfg, threads=4, out_dir=str(out2))
    assert len(r1.spectrum_files) == 6  # csv + json per sweep point
    for f1, f2 in zip(r1.spectrum_files, r2.spectrum_files):
        assert open(f1, "rb").read() == open(f2, "rb").read()
    assert open(r1.table_file).read() == open(r2.table_file).read()
    table = open(r1.table_file).read().strip().split("\n")
    assert table[0].startswith("omega_rabi_rad_per_s,N[-5]")
    assert len(table) == 4
    manifest = json.loads(open(r1.manifest_file).read())
    assert manifest["tool"] == "qwmix"
    assert manifest["resolved"]["sweep"]["parameter"] == "omega_rabi"
    assert "sweep_table.csv" in manifest["outputs"]


def test_cli_run_and_exit_codes(tmp_path, capsys):
    cfg_path = write_config(tmp_path, CLASSICAL)
    out_dir = str(tmp_path / "cli_out")
    assert main(["run", cfg_path, "--out", out_dir, "--threads", "1"]) == 0
    assert os.path.exists(os.path.join(out_dir, "spectrum_0000.csv"))
    assert os.path.exists(os.path.join(out_dir, "manifest.json"))

    bad = json.loads(json.dumps(CLASSICAL))
    bad["spectrum"]["method"] = "fft"
    bad_path = write_config(tmp_path, bad, "bad.yaml")
    assert main(["run", bad_path]) == 2
    assert main(["run", str(tmp_path / "missing.yaml")]) == 2

    # unwritable output location: a path below a regular file
    blocker = tmp_path / "blocker"
    blocker.write_text("x")
    assert main(["run", cfg_path, "--out", str(blocker / "sub")]) == 4
    capsys.readouterr()


def test_cli_selftest_filter_and_fault_hook(capsys):
    assert main(["selftest", "--criteria", "A7"]) == 0
    out = capsys.readouterr().out
    assert "A7" in out and "PASS" in out

    assert main(["selftest", "--criteria", "A7", "--fault", "bessel"]) == 3
    out = capsys.readouterr().out
    assert "FAIL" in out

    assert main(["selftest", "--criteria", "A99"]) == 2


def test_fault_hook_is_restored_after_selftest():
    from qwmix import oracles
    from qwmix.selftest import run_selftest
    before = oracles.bessel_j(1, 1.0)
    ok, _ = run_selftest(criteria=["A7"], faults=frozenset({"bessel"}))
    assert not ok
    assert oracles.bessel_j(1, 1.0) == before
