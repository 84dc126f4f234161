import json
import subprocess
import sys

import pytest

from sievelab import cli
from sievelab.configfile import ConfigError, parse_config_text
from sievelab.scenarios import SCHEMAS, run_scenario

SHARPNESS_CFG = """\
[scenario]
name = large-sieve-sharpness
seed = 0

[params]
x_grid = 1000, 2000

[output]
json = out.json
csv = out.csv
"""


def _write(tmp_path, text, name="scenario.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_run_writes_reports(tmp_path, capsys):
    cfg = _write(tmp_path, SHARPNESS_CFG)
    rc = cli.main(["run", cfg, "--out-dir", str(tmp_path)])
    assert rc == 0
    report = json.loads((tmp_path / "out.json").read_text())
    assert report["scenario"] == "large-sieve-sharpness"
    assert report["seed"] == 0
    assert len(report["config_hash"]) == 16
    assert "version" in report
    rows = (tmp_path / "out.csv").read_text().splitlines()
    assert rows[0] == "x,q,size,bound,crude_bound,ratio"
    assert len(rows) == 3


def test_run_reruns_are_byte_identical(tmp_path):
    cfg = _write(tmp_path, SHARPNESS_CFG)
    assert cli.main(["run", cfg, "--out-dir", str(tmp_path / "a")]) == 0
    assert cli.main(["run", cfg, "--out-dir", str(tmp_path / "b")]) == 0
    assert (tmp_path / "a" / "out.json").read_bytes() == (tmp_path / "b" / "out.json").read_bytes()
    assert (tmp_path / "a" / "out.csv").read_bytes() == (tmp_path / "b" / "out.csv").read_bytes()


def test_run_list_names_scenarios(capsys):
    assert cli.main(["run", "--list"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert "large-sieve-sharpness" in out
    assert "quasisquare-census" in out


def test_exit_code_2_on_config_errors(tmp_path, capsys):
    bad = _write(tmp_path, "[scenario]\nname = no-such\n")
    assert cli.main(["run", bad]) == 2
    assert "config error" in capsys.readouterr().err
    unknown_key = _write(
        tmp_path, "[scenario]\nname = energy-audit\n\n[params]\nbogus = 1\n", "k.cfg"
    )
    assert cli.main(["run", unknown_key]) == 2
    err = capsys.readouterr().err
    assert "params.bogus" in err
    assert cli.main(["run", str(tmp_path / "missing.cfg")]) == 2
    assert cli.main(["run"]) == 2


def test_exit_code_3_on_infeasible(tmp_path, capsys):
    infeasible = _write(
        tmp_path,
        "[scenario]\nname = progression-intersection\n\n[params]\nsize = 100000\n",
    )
    assert cli.main(["run", infeasible]) == 3
    assert "infeasible" in capsys.readouterr().err


def test_search_command(tmp_path, capsys):
    out = str(tmp_path / "search.json")
    rc = cli.main(["search", "--x", "24", "--primes", "3,5,7", "--json", out])
    assert rc == 0
    stdout = capsys.readouterr().out
    assert "size=8" in stdout and "certified=True" in stdout
    data = json.loads(open(out).read())
    assert data["size"] == 8
    assert data["elements"][0] >= 1


def test_search_infeasible_method_is_usage_error(capsys):
    assert cli.main(["search", "--x", "40", "--method", "exhaustive"]) == 2


def test_verify_subset(capsys):
    rc = cli.main(["verify", "--only", "3,11"])
    out = capsys.readouterr().out
    assert rc == 0
    lines = [l for l in out.splitlines() if l.strip()]
    assert len(lines) == 2
    assert all("PASS" in l for l in lines)
    assert "[ 3]" in lines[0] and "[11]" in lines[1]


def test_verify_rejects_unknown_criterion(capsys):
    assert cli.main(["verify", "--only", "99"]) == 2


def test_export_majorant(tmp_path):
    out = str(tmp_path / "maj.csv")
    assert cli.main(["export", "majorant", "--eps", "0.5", "--out", out]) == 0
    lines = open(out).read().splitlines()
    assert lines[0] == "k,c_k"
    assert lines[1] == "0,1"
    assert len(lines) == 10  # constant + degrees 1..8
    assert abs(float(lines[2].split(",")[1]) - 1.62113893828) < 1e-9


def test_export_census(tmp_path):
    out = str(tmp_path / "census.csv")
    assert cli.main(["export", "census", "--y", "15", "--window", "3,3", "--out", out]) == 0
    lines = open(out).read().splitlines()
    assert lines == ["q", "1", "7", "10", "13"]


def test_module_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "sievelab.cli", "--version"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("sievelab ")


def test_config_parser_paths():
    cfg = parse_config_text(SHARPNESS_CFG, SCHEMAS)
    assert cfg.name == "large-sieve-sharpness"
    assert cfg.params["x_grid"] == (1000, 2000)
    assert cfg.output_path("json", "d.json") == "out.json"
    with pytest.raises(ConfigError):
        parse_config_text("[scenario]\nseed = 1\n", SCHEMAS)  # name missing
    with pytest.raises(ConfigError):
        parse_config_text(
            "[scenario]\nname = energy-audit\nseed = x\n", SCHEMAS
        )  # bad cast
    with pytest.raises(ConfigError):
        parse_config_text(
            "[scenario]\nname = energy-audit\n\n[extra]\nk = 1\n", SCHEMAS
        )  # unknown section


def test_scenario_envelope_and_worker_invariance(tmp_path, monkeypatch):
    cfg = parse_config_text(SHARPNESS_CFG, SCHEMAS)
    seq = run_scenario(cfg)
    monkeypatch.setenv("SIEVELAB_WORKERS", "4")
    par = run_scenario(cfg)
    assert seq.report == par.report
    assert seq.csv_rows == par.csv_rows
    assert seq.report["config_hash"] == cfg.config_hash
