import json

import pytest

from coarse_entropy.cli import main
from coarse_entropy.presets import (PRESETS, config_sha256, reproduce,
                                    run_config)


def test_list_presets(capsys):
    assert main(["list-presets"]) == 0
    out = capsys.readouterr().out.split()
    assert sorted(out) == out
    assert set(out) == set(PRESETS)


def test_estimate_writes_json_and_csv(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(PRESETS["LINEAR_1D_DOUBLING"]))
    out_json = tmp_path / "r.json"
    out_csv = tmp_path / "r.csv"
    rc = main(["estimate", "--config", str(cfg),
               "--out-json", str(out_json), "--out-csv", str(out_csv)])
    assert rc == 0
    assert "h_inf ~=" in capsys.readouterr().out
    report = json.loads(out_json.read_text())
    assert report["config_sha256"] == config_sha256(PRESETS["LINEAR_1D_DOUBLING"])
    lines = out_csv.read_text().splitlines()
    assert lines[0] == "n,delta,R,strategy,separated_lower,spanning_upper"
    assert len(lines) > 1


def test_csv_is_byte_identical_across_runs(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(PRESETS["LINEAR_2D_DIAG23"]))
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["estimate", "--config", str(cfg), "--out-csv", str(a)]) == 0
    assert main(["estimate", "--config", str(cfg), "--out-csv", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_export_config_round_trips(tmp_path):
    exported = tmp_path / "exported.json"
    assert main(["reproduce", "E5_IDENTITY_GROWTH",
                 "--export-config", str(exported)]) == 0
    cfg = json.loads(exported.read_text())
    direct = run_config(cfg)
    via_preset = reproduce("E5_IDENTITY_GROWTH")
    assert direct.csv_lines == via_preset.csv_lines
    assert direct.report["entropy"] == via_preset.report["entropy"]


def test_invalid_config_exits_2(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"schema_version": 1, "kind": "entropy"}))
    assert main(["estimate", "--config", str(cfg)]) == 2
    assert "invalid config" in capsys.readouterr().err


def test_decreasing_deltas_exit_2(tmp_path):
    cfg_data = json.loads(json.dumps(PRESETS["LINEAR_1D_DOUBLING"]))
    cfg_data["schedule"] = cfg_data["schedule"][::-1]
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(cfg_data))
    assert main(["estimate", "--config", str(cfg)]) == 2


def test_missing_config_file_exits_2():
    assert main(["estimate", "--config", "/nonexistent/cfg.json"]) == 2


def test_unknown_preset_exits_2(capsys):
    assert main(["reproduce", "NOT_A_PRESET"]) == 2


def test_budget_env_override_exits_3(tmp_path, monkeypatch):
    monkeypatch.setenv("ORBIT_BUDGET", "10")
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(PRESETS["E2_CHAIN"]))
    assert main(["estimate", "--config", str(cfg)]) == 3


def test_bad_budget_env_exits_2(tmp_path, monkeypatch):
    monkeypatch.setenv("ORBIT_BUDGET", "lots")
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(PRESETS["LINEAR_1D_DOUBLING"]))
    assert main(["estimate", "--config", str(cfg)]) == 2


def test_bcd_command_requires_bcd_kind(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(PRESETS["LINEAR_1D_DOUBLING"]))
    assert main(["bcd", "--config", str(cfg)]) == 2


def test_bcd_command_runs(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "schema_version": 1, "kind": "bcd",
        "space": {"type": "euclidean", "dim": 1},
        "region_radius": "0.5",
        "epsilons": ["0.111", "0.037", "0.0123"],
    }))
    assert main(["bcd", "--config", str(cfg)]) == 0
    assert "bcd ~=" in capsys.readouterr().out


def test_check_map_command(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "schema_version": 1, "kind": "check_map",
        "space": {"type": "euclidean", "dim": 1},
        "map": {"type": "linear", "matrix": [["2"]]},
        "control": {"type": "affine", "a": "2"},
        "region_radius": "50", "samples": 200, "seed": 5,
        "checks": ["control", "embedding"],
    }))
    out = tmp_path / "r.json"
    assert main(["check-map", "--config", str(cfg), "--out-json", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["check_map"]["control"]["violations"] == 0


def test_reproduce_assertion_failure_exits_4(monkeypatch):
    from coarse_entropy import presets
    monkeypatch.setitem(presets.PRESET_ASSERTIONS, "LINEAR_1D_DOUBLING",
                        lambda report, run: (False, "forced failure"))
    assert main(["reproduce", "LINEAR_1D_DOUBLING"]) == 4


@pytest.mark.parametrize("pid", ["LINEAR_1D_DOUBLING", "CO4_CONJUGACY",
                                 "LEM_SELF_PRODUCT"])
def test_reproduce_fast_presets_pass(pid, capsys):
    assert main(["reproduce", pid]) == 0
    assert "PASS" in capsys.readouterr().out
