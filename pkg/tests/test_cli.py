import json
import subprocess
import sys

import pytest

from irs_est.cli import build_parser, load_config, parse_and_dispatch
from irs_est.experiments import ExperimentConfig


@pytest.fixture
def small_config(tmp_path):
    cfg = ExperimentConfig(n_samples=3000, trials=2000, out_dir=str(tmp_path / "from-config"))
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg.to_dict()))
    return path


def test_defaults_keyword_matches_dataclass_defaults():
    assert load_config("defaults") == ExperimentConfig()


def test_all_writes_four_datasets(small_config, tmp_path, capsys):
    out = tmp_path / "out"
    assert parse_and_dispatch(["all", "--config", str(small_config), "--seed", "0", "--out", str(out)]) == 0
    assert len(list(out.glob("*.csv"))) == 4
    summary = json.loads((out / "summary.json").read_text())
    assert summary["ok"] and summary["seed"] == 0
    assert "mse-energy: ok" in capsys.readouterr().out


def test_overrides_reach_outputs(small_config, tmp_path):
    out = tmp_path / "out"
    argv = ["mse-energy", "--config", str(small_config), "--out", str(out), "--link", "2",
            "--trials", "500", "--n1", "7", "--fisher-mode", "complex", "--seed", "9"]
    assert parse_and_dispatch(argv) == 0
    text = (out / "mse_vs_energy_link2.csv").read_text()
    assert "# seed: 9" in text and "# fisher_mode: complex" in text
    cfg = json.loads(text.split("# config: ")[1].splitlines()[0])
    assert cfg["experiment"]["trials"] == 500 and cfg["params"]["N1"] == 7


def test_env_fallback_and_precedence(small_config, tmp_path, monkeypatch):
    env_dir = tmp_path / "env"
    monkeypatch.setenv("IRS_EST_OUT", str(env_dir))
    assert parse_and_dispatch(["hist-fit", "--config", str(small_config)]) == 0
    assert (env_dir / "hist_fit_link1_n60.csv").exists()
    flag_dir = tmp_path / "flag"
    assert parse_and_dispatch(["hist-fit", "--config", str(small_config), "--out", str(flag_dir)]) == 0
    assert (flag_dir / "hist_fit_link1_n60.csv").exists()
    monkeypatch.delenv("IRS_EST_OUT")
    assert parse_and_dispatch(["hist-fit", "--config", str(small_config)]) == 0
    assert (tmp_path / "from-config" / "hist_fit_link1_n60.csv").exists()


def test_bad_link_is_usage_error(small_config, capsys):
    assert parse_and_dispatch(["hist-fit", "--config", str(small_config), "--link", "4"]) == 1
    err = capsys.readouterr().err
    assert "link must be 1, 2, or 3" in err
    assert err.count("\n") == 1 and err.startswith("irs-est: error:")


@pytest.mark.parametrize("argv", [
    ["all", "--config", "defaults", "--bogus"],
    ["all"],
    ["nope"],
    [],
    ["all", "--config", "defaults", "--seed", "-1"],
    ["all", "--config", "defaults", "--trials", "0"],
])
def test_usage_errors_exit_1(argv, capsys):
    assert parse_and_dispatch(argv) == 1
    assert capsys.readouterr().err.startswith("irs-est: error:")


def test_missing_keys_are_listed(tmp_path, capsys):
    d = ExperimentConfig().to_dict()
    del d["experiment"]["seed"]
    del d["params"]["L"]
    path = tmp_path / "c.json"
    path.write_text(json.dumps(d))
    assert parse_and_dispatch(["all", "--config", str(path)]) == 1
    err = capsys.readouterr().err
    assert "params.L" in err and "experiment.seed" in err


def test_unreadable_and_invalid_config(tmp_path, capsys):
    assert parse_and_dispatch(["all", "--config", str(tmp_path / "absent.json")]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert parse_and_dispatch(["all", "--config", str(bad)]) == 1
    err = capsys.readouterr().err
    assert "cannot read config" in err and "not valid JSON" in err


def test_runtime_failure_exits_2(small_config, tmp_path, capsys):
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    assert parse_and_dispatch(["hist-fit", "--config", str(small_config), "--out", str(blocker / "x")]) == 2
    assert "cannot write" in capsys.readouterr().err


def test_help_documents_every_flag(capsys):
    assert parse_and_dispatch(["all", "--help"]) == 0
    out = capsys.readouterr().out
    for flag in ("--config", "--seed", "--out", "--link", "--trials", "--n1", "--fisher-mode", "IRS_EST_OUT"):
        assert flag in out
    top = build_parser().format_help()
    for cmd in ("hist-fit", "mse-energy", "mse-length", "all", "validate"):
        assert cmd in top


def test_console_script_module_entry(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "irs_est.cli", "all", "--config", "defaults", "--link", "9"],
                          capture_output=True, text=True)
    assert proc.returncode == 1
    assert "link must be 1, 2, or 3" in proc.stderr


@pytest.mark.slow
def test_all_with_bundled_defaults(tmp_path):
    assert parse_and_dispatch(["all", "--config", "defaults", "--seed", "0", "--out", str(tmp_path)]) == 0
    assert len(list(tmp_path.glob("*.csv"))) == 4


@pytest.mark.slow
def test_validate_passes(capsys):
    assert parse_and_dispatch(["validate", "--seed", "0"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and "checks passed" in out
