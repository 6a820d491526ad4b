import json
from dataclasses import replace

import numpy as np
import pytest

from uavbs import harness
from uavbs.config import ConfigError, load_config
from uavbs.harness import (
    FIGURE_KEYS,
    CheckpointMismatch,
    compare_methods,
    export_figure_data,
    read_table,
    run_inference,
    run_training,
)


def _bytes(d):
    return {p.name: p.read_bytes() for p in sorted(d.iterdir()) if p.is_file()}


def test_run_directory_structure(tmp_path, tiny):
    cfg = tiny()
    run = run_training(cfg, tmp_path / "run")
    names = {p.name for p in run.iterdir()}
    assert {"config.ini", "manifest.json", "metrics.jsonl", "checkpoint.ckpt", "evaluation.json"} <= names
    manifest = json.loads((run / "manifest.json").read_text())
    assert manifest["schema"] == harness.MANIFEST_SCHEMA
    assert manifest["status"] == "complete" and manifest["epoch"] == 6 and manifest["env_steps"] == 240
    assert manifest["config_hash"] == harness.config_hash(cfg)
    lines = (run / "metrics.jsonl").read_text().splitlines()
    assert json.loads(lines[0])["schema"] == harness.METRICS_SCHEMA
    records = [json.loads(l) for l in lines[1:]]
    assert [r["epoch"] for r in records] == list(range(6))
    assert all(0 <= r["tau"] <= 1 and 0 <= r["omega"] <= 1 for r in records)
    assert load_config(run / "config.ini") == cfg


def test_training_deterministic(tmp_path, tiny):
    a = run_training(tiny(), tmp_path / "a")
    b = run_training(tiny(), tmp_path / "b")
    assert _bytes(a) == _bytes(b)


def test_zero_epochs(tmp_path, tiny):
    run = run_training(tiny(epochs=0), tmp_path / "run")
    lines = (run / "metrics.jsonl").read_text().splitlines()
    assert len(lines) == 1
    assert json.loads((run / "manifest.json").read_text())["epoch"] == 0


def test_random_has_no_checkpoint(tmp_path, tiny):
    run = run_training(tiny(method="random"), tmp_path / "run")
    names = {p.name for p in run.iterdir()}
    assert "checkpoint.ckpt" not in names and "state.npz" not in names
    assert {"config.ini", "manifest.json", "metrics.jsonl"} <= names
    assert json.loads((run / "manifest.json").read_text())["updates"] == 0


def test_resume_bit_exact(tmp_path, tiny, monkeypatch):
    cfg = tiny(epochs=10, checkpoint_every=4)
    full = run_training(cfg, tmp_path / "full")

    calls = {"n": 0}
    real = harness.run_episode

    def crashing(*args, **kwargs):
        calls["n"] += 1
        if calls["n"] == 7:
            raise KeyboardInterrupt
        return real(*args, **kwargs)

    monkeypatch.setattr(harness, "run_episode", crashing)
    with pytest.raises(KeyboardInterrupt):
        run_training(cfg, tmp_path / "part")
    monkeypatch.setattr(harness, "run_episode", real)
    manifest = json.loads((tmp_path / "part" / "manifest.json").read_text())
    assert manifest["status"] == "running" and manifest["epoch"] == 4
    run_training(cfg, tmp_path / "part", resume=True)
    assert _bytes(full) == _bytes(tmp_path / "part")


def test_resume_rejects_other_config(tmp_path, tiny):
    run_training(tiny(epochs=2), tmp_path / "run")
    with pytest.raises(CheckpointMismatch):
        run_training(tiny(epochs=3), tmp_path / "run", resume=True)


def test_inference_trace(tmp_path, tiny):
    cfg = tiny()
    run = run_training(cfg, tmp_path / "run")
    out = run_inference(cfg, run / "checkpoint.ckpt", episodes=2)
    lines = (out / "trace.jsonl").read_text().splitlines()
    assert json.loads(lines[0])["schema"] == harness.TRACE_SCHEMA
    steps = [json.loads(l) for l in lines[1:]]
    assert len(steps) == 2 * 40
    for ep in (0, 1):
        assert [s["step"] for s in steps if s["episode"] == ep] == list(range(1, 41))
    for s in steps:
        assert s["served_agents"] + s["served_nonagents"] == s["served_total"]
        assert sum(s["served"]) == s["served_agents"]
        assert {u["z"] for u in s["uavs"][:2]} <= {1500.0, 2000.0, 2500.0}
    ev = json.loads((out / "evaluation.json").read_text())
    assert ev["episodes"] == 2 and 0 <= ev["support_rate"] <= 1


def test_inference_topology_mismatch(tmp_path, tiny):
    run = run_training(tiny(epochs=1), tmp_path / "run")
    with pytest.raises(CheckpointMismatch):
        run_inference(tiny(hidden=9), run / "checkpoint.ckpt")
    with pytest.raises(CheckpointMismatch):
        run_inference(tiny(method="comp2"), run / "checkpoint.ckpt")
    bigger = tiny()
    bigger = replace(bigger, world=replace(bigger.world, n_ues=9))
    with pytest.raises(CheckpointMismatch):
        run_inference(bigger, run / "checkpoint.ckpt")
    (tmp_path / "junk.ckpt").write_text("nonsense\n")
    with pytest.raises(CheckpointMismatch):
        run_inference(tiny(), tmp_path / "junk.ckpt")


def test_export_figures(tmp_path, tiny):
    cfg = tiny()
    run = run_training(cfg, tmp_path / "run")
    with pytest.raises(ConfigError):
        export_figure_data(run, "trajectory")
    run_inference(cfg, run / "checkpoint.ckpt", episodes=1)
    expected_cols = {
        "reward_curve": ["epoch", "total_reward", "r_b1", "r_b2"],
        "support_rate": ["epoch", "tau"],
        "qos": ["epoch", "qos"],
        "overlap": ["epoch", "omega"],
        "energy": ["epoch", "energy_b1_j", "energy_b2_j"],
        "trajectory": ["episode", "step", "uav_id", "x", "y", "z", "alive"],
    }
    for key in FIGURE_KEYS:
        path = export_figure_data(run, key)
        first = path.read_bytes()
        schema, cols, rows = read_table(path)
        assert schema == f"uavbs-figure/1 figure={key}"
        assert cols == expected_cols[key]
        assert len(rows) == (40 * 3 if key == "trajectory" else 6)
        assert export_figure_data(run, key).read_bytes() == first
    _, _, rows = read_table(run / "figures" / "reward_curve.tsv")
    for row in rows:
        assert float(row[1]) == pytest.approx(float(row[2]) + float(row[3]))
    with pytest.raises(ConfigError):
        export_figure_data(run, "histogram")


def test_compare_methods(tmp_path, tiny):
    cfg = tiny(epochs=2)
    summary = compare_methods(cfg, ["random", "proposed"], [1, 2], tmp_path / "cmp")
    schema, cols, rows = read_table(summary)
    assert schema == harness.SUMMARY_SCHEMA
    table = {r[0]: dict(zip(cols, r)) for r in rows}
    assert table["random"]["n_ok"] == "2" and table["random"]["flops"] == "0"
    assert float(table["random"]["support_rate_mean"]) >= 0
    flops = harness.policy_flops(cfg)
    assert int(table["proposed"]["flops"]) == flops["method"] == flops["commnet"] + flops["dnn"]
    # Random is evaluated without training epochs
    manifest = json.loads((tmp_path / "cmp" / "random" / "seed-1" / "manifest.json").read_text())
    assert manifest["epochs"] == 0
    again = compare_methods(cfg, ["random", "proposed"], [1, 2], tmp_path / "cmp2")
    assert again.read_bytes() == summary.read_bytes()


def test_compare_records_failures(tmp_path, tiny, monkeypatch):
    real = harness.run_training

    def flaky(cfg, out_dir=None, **kw):
        if cfg.seed == 2 and cfg.method.value == "comp1":
            raise RuntimeError("boom")
        return real(cfg, out_dir, **kw)

    monkeypatch.setattr(harness, "run_training", flaky)
    summary = compare_methods(tiny(epochs=1), ["comp1"], [1, 2], tmp_path / "cmp")
    _, cols, rows = read_table(summary)
    row = dict(zip(cols, rows[0]))
    assert row["n_ok"] == "1" and row["failures"] == "2"
    _, _, cells = read_table(tmp_path / "cmp" / "cells.tsv")
    assert any("boom" in c[2] for c in cells)
    with pytest.raises(ConfigError):
        compare_methods(tiny(), [], [1])


def test_episode_seed_streams():
    assert harness.episode_seed(0, "world", 1) == harness.episode_seed(0, "world", 1)
    assert harness.episode_seed(0, "world", 1) != harness.episode_seed(0, "eval", 1)
    assert 0 <= harness.episode_seed(3, "world", 5) < 2**32
