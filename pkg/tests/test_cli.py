import json

import pytest

from bdyqft.cli import COMMANDS, RunConfig, load_config, main
from bdyqft.errors import ConfigError

FAST = [c for c in COMMANDS if c != "extend"]


@pytest.mark.parametrize("command", FAST)
def test_command_passes(tmp_path, command, capsys):
    assert main([command, "--no-figures", "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / f"{command}.json").read_text())
    assert doc["command"] == command and doc["passed"]
    assert {"config_hash", "config", "scope", "checks"} <= set(doc)
    assert all(set(c) >= {"name", "status", "witness", "tolerance"} for c in doc["checks"])


def test_extend_single_fixture(tmp_path):
    assert main(["extend", "--no-figures", "--fixture", "points", "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "extend.json").read_text())
    assert all(v["normal_form"] == v["oracle"] for v in doc["dimensions"].values())


def test_figures_and_csv(tmp_path):
    assert main(["kg-support", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "kg-support.png").stat().st_size > 0
    lines = (tmp_path / "kg-support_mode_mask.csv").read_text().splitlines()
    assert lines[0].startswith("t,") and len(lines) == 122


def test_empty_seeds_exit_2(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seeds": {}}))
    assert main(["geometry-check", "--config", str(cfg), "--out", str(tmp_path)]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "EmptyCatalog"


def test_unknown_key_exit_2(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"colour": "red"}))
    assert main(["catalog-build", "--config", str(cfg), "--out", str(tmp_path)]) == 2
    assert json.loads(capsys.readouterr().err)["error"] == "ConfigError"


def test_unknown_fixture_exit_2(tmp_path):
    assert main(["characterize", "--fixture", "nope", "--no-figures", "--out", str(tmp_path)]) == 2


def test_failing_check_exit_1(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"tol_quad": 1e-30}))
    assert main(["kg-green", "--config", str(cfg), "--no-figures", "--out", str(tmp_path)]) == 1
    assert json.loads(capsys.readouterr().err)["error"] == "CheckFailed"


def test_structured_error_exit_2(tmp_path, capsys):
    # round-off in tau exceeds an absurd tolerance: the Dirichlet pair is rejected
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"tol_quad": 1e-30}))
    assert main(["kg-ideal", "--config", str(cfg), "--no-figures", "--out", str(tmp_path)]) == 2
    assert json.loads(capsys.readouterr().err)["error"] == "NotAdjointRelated"


def test_custom_seeds(tmp_path):
    cfg = tmp_path / "cfg.json"
    seeds = {"A": {"diamond": [0, "1/2", "1/10"]}, "B": {"diamond": [0, 0, "1/5"]}, "M": "whole"}
    cfg.write_text(json.dumps({"seeds": seeds, "lattice_grids": [50]}))
    assert main(["geometry-check", "--config", str(cfg), "--no-figures", "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "geometry-check.json").read_text())
    assert {r["id"] for r in doc["catalog"]["regions"]} >= {"A", "B", "M"}


def test_config_round_trip():
    cfg = RunConfig(seed=3, max_len=2, fixture="points")
    assert RunConfig.from_dict(cfg.to_dict()) == cfg
    with pytest.raises(ConfigError):
        RunConfig(tol_lin=-1).validate()
    with pytest.raises(ConfigError):
        load_config(None, {"max_len": 9})


def test_deterministic_output(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert main(["catalog-build", "--no-figures", "--out", str(out)]) == 0
    assert (a / "catalog-build.json").read_bytes() == (b / "catalog-build.json").read_bytes()
    assert (a / "catalog.json").read_bytes() == (b / "catalog.json").read_bytes()
