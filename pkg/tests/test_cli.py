import json
import subprocess
import sys

import pytest

from uavbs.cli import main, resolve_seed
from uavbs.config import CONFIG_SCHEMA, ConfigError, preset, save_config


@pytest.fixture
def config_file(tmp_path, tiny):
    path = tmp_path / "c.ini"
    save_config(tiny(epochs=2), path)
    return path


def test_train_eval_export(tmp_path, config_file, capsys, monkeypatch):
    monkeypatch.delenv("UAVBS_SEED", raising=False)
    run = tmp_path / "run"
    assert main(["train", "--config", str(config_file), "--out", str(run), "--seed", "4"]) == 0
    manifest = json.loads((run / "manifest.json").read_text())
    assert manifest["seed"] == 4 and manifest["seed_source"] == "cli"
    assert main(["eval", "--config", str(config_file), "--seed", "4", "--checkpoint", str(run / "checkpoint.ckpt"),
                 "--episodes", "1"]) == 0
    assert (run / "eval" / "trace.jsonl").exists()
    for key in ("reward_curve", "trajectory"):
        assert main(["export", "--run", str(run), "--figure", key]) == 0
    assert main(["export", "--run", str(run), "--figure", "bogus"]) == 2


def test_env_seed_recorded(tmp_path, config_file, monkeypatch):
    monkeypatch.setenv("UAVBS_SEED", "9")
    run = tmp_path / "run"
    assert main(["train", "--config", str(config_file), "--out", str(run)]) == 0
    manifest = json.loads((run / "manifest.json").read_text())
    assert manifest["seed"] == 9 and manifest["seed_source"] == "env" and manifest["env_seed_override"] == "9"
    monkeypatch.setenv("UAVBS_SEED", "nine")
    assert main(["train", "--config", str(config_file), "--out", str(run)]) == 2


def test_resolve_seed_precedence():
    cfg = preset("desk")
    assert resolve_seed(cfg, None, {})[1] == "config"
    assert resolve_seed(cfg, None, {"UAVBS_SEED": "3"})[0].seed == 3
    got, source, env = resolve_seed(cfg, 5, {"UAVBS_SEED": "3"})
    assert (got.seed, source, env) == (5, "cli", "3")
    with pytest.raises(ConfigError):
        resolve_seed(cfg, None, {"UAVBS_SEED": "x"})


def test_exit_codes(tmp_path, config_file, monkeypatch):
    monkeypatch.delenv("UAVBS_SEED", raising=False)
    assert main([]) == 2
    assert main(["train"]) == 2
    assert main(["train", "--config", str(tmp_path / "missing.ini")]) == 2
    bad = tmp_path / "bad.ini"
    bad.write_text(f"[scenario]\nschema = {CONFIG_SCHEMA}\n[train]\ngamma = 2\n")
    assert main(["train", "--config", str(bad)]) == 2
    assert main(["compare", "--config", str(config_file), "--methods", "best", "--seeds", "1"]) == 2
    assert main(["compare", "--config", str(config_file), "--methods", "random", "--seeds", "a,b"]) == 2
    run = tmp_path / "run"
    assert main(["train", "--config", str(config_file), "--out", str(run)]) == 0
    # paper preset: different topology than the checkpoint
    assert main(["eval", "--config", str(config_file), "--preset", "paper",
                 "--checkpoint", str(run / "checkpoint.ckpt")]) == 3
    # output directory is a file: internal I/O error
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["train", "--config", str(config_file), "--out", str(blocker / "sub")]) == 1


def test_compare_cli(tmp_path, config_file, capsys):
    out = tmp_path / "cmp"
    assert main(["compare", "--config", str(config_file), "--methods", "random,comp2", "--seeds", "1",
                 "--out", str(out)]) == 0
    assert (out / "summary.tsv").read_text().startswith("# uavbs-compare/1")


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "uavbs", "export", "--run", str(tmp_path), "--figure", "x"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
    assert "unknown figure key" in proc.stderr
