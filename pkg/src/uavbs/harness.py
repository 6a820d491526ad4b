"""Experiment orchestration: training runs, inference traces, comparisons, figure data.

Run directory layout (``run_training``)::

    config.ini        effective configuration (reloadable)
    manifest.json     run bookkeeping, one JSON line
    metrics.jsonl     schema header, then one record per epoch
    checkpoint.ckpt   final networks (trained methods only)
    state.npz         full learner state for resumption (when checkpointing)
    evaluation.json   greedy evaluation of the final policy

One epoch is one full episode.
"""

from __future__ import annotations

import json
import logging
import math
import os
import zlib
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, ScenarioConfig, config_hash, dump_config
from .marl import (
    CommNet,
    CtdeLearner,
    Method,
    ReplayBuffer,
    Team,
    commnet_flops,
    make_rngs,
    method_flops,
    run_episode,
)
from .nn import Mlp, flops_count, load_checkpoint, save_checkpoint
from .world import N_ACTIONS, UavWorld

log = logging.getLogger(__name__)

MANIFEST_SCHEMA = "uavbs-manifest/1"
METRICS_SCHEMA = "uavbs-metrics/1"
TRACE_SCHEMA = "uavbs-trace/1"
EVAL_SCHEMA = "uavbs-eval/1"
STATE_SCHEMA = "uavbs-train-state/1"
FIGURE_SCHEMA = "uavbs-figure/1"
SUMMARY_SCHEMA = "uavbs-compare/1"
FIGURE_KEYS = ("reward_curve", "support_rate", "qos", "overlap", "energy", "trajectory")


class CheckpointMismatch(Exception):
    """Checkpoint or saved state does not fit the configuration (CLI exit code 3)."""


def episode_seed(seed: int, label: str, index: int) -> int:
    """32-bit world seed of episode ``index`` in the stream named ``label``."""
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFF, zlib.crc32(label.encode()), int(index)])
    return int(ss.generate_state(1)[0])


def build_world(cfg: ScenarioConfig) -> UavWorld:
    return UavWorld(cfg.world, cfg.radio.budget, cfg.radio.pattern, cfg.radio.mcs_table(), cfg.energy)


def build_team(cfg: ScenarioConfig, rng=None) -> Team:
    rng = make_rngs(cfg.seed)["policy-init"] if rng is None else rng
    return Team.build(cfg.method, cfg.world.obs_dim, cfg.world.m_agents, cfg.train, rng)


def policy_flops(cfg: ScenarioConfig) -> dict:
    """Per-policy forward FLOPs and the method total for ``cfg``'s topology."""
    rng = np.random.default_rng(0)
    m, t = cfg.world.m_agents, cfg.train
    dnn = flops_count(Mlp.policy(cfg.world.obs_dim, N_ACTIONS, rng, t.hidden, t.depth))
    n_comm = m if t.leader_sees_self else m - 1
    comm = commnet_flops(CommNet.build(cfg.world.obs_dim, n_comm, rng, t.hidden, t.comm_layers,
                                       comm_mean=t.comm_mean, leader_included=t.leader_sees_self))
    return {"dnn": dnn, "commnet": comm, "method": method_flops(cfg.method, dnn, comm, m)}


def _write_json_line(path: Path, obj) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(json.dumps(obj) + "\n")
    os.replace(tmp, path)


def _read_jsonl(path: Path, schema: str) -> tuple[dict, list[dict]]:
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror or exc}") from None
    if not lines:
        raise ConfigError(f"{path}: empty file")
    header = json.loads(lines[0])
    if header.get("schema") != schema:
        raise ConfigError(f"{path}: expected schema {schema}, found {header.get('schema')!r}")
    return header, [json.loads(line) for line in lines[1:] if line.strip()]


def read_manifest(run_dir) -> dict:
    path = Path(run_dir) / "manifest.json"
    try:
        manifest = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror or exc}") from None
    if manifest.get("schema") != MANIFEST_SCHEMA:
        raise ConfigError(f"{path}: unsupported manifest schema {manifest.get('schema')!r}")
    return manifest


# ---------------------------------------------------------------- checkpoints

def _actor_networks(team: Team, prefix: str) -> dict:
    out = {}
    for i, net in enumerate(team.nets):
        if isinstance(net, CommNet):
            out[f"{prefix}{i}.encoder"] = net.encoder
            for j, layer in enumerate(net.comm):
                out[f"{prefix}{i}.comm{j}"] = layer
            out[f"{prefix}{i}.head"] = net.head
        else:
            out[f"{prefix}{i}"] = net
    return out


def _learner_networks(learner: CtdeLearner) -> dict:
    nets = _actor_networks(learner.team, "actor")
    nets.update(_actor_networks(learner.target_team, "target_actor"))
    for k, (c, t) in enumerate(zip(learner.critics, learner.target_critics)):
        nets[f"critic{k}"] = c
        nets[f"target_critic{k}"] = t
    return nets


def _topology(cfg: ScenarioConfig) -> dict:
    return {
        "method": cfg.method.value,
        "m_agents": cfg.world.m_agents,
        "obs_dim": cfg.world.obs_dim,
        "hidden": cfg.train.hidden,
        "depth": cfg.train.depth,
        "comm_layers": cfg.train.comm_layers,
    }


def save_team_checkpoint(path, cfg: ScenarioConfig, learner: CtdeLearner, epoch: int) -> None:
    meta = {"topology": _topology(cfg), "config_hash": config_hash(cfg), "epoch": epoch,
            "owner": learner.team.owner}
    save_checkpoint(path, _learner_networks(learner), meta)


def load_team(cfg: ScenarioConfig, path) -> Team:
    """Actor team for ``cfg`` with parameters from a checkpoint; raises on any mismatch."""
    try:
        nets, meta = load_checkpoint(path)
    except OSError as exc:
        raise ConfigError(f"cannot read checkpoint {path}: {exc.strerror or exc}") from None
    except (ValueError, KeyError) as exc:
        raise CheckpointMismatch(f"{path}: {exc}") from None
    expected = _topology(cfg)
    found = meta.get("topology", {})
    if found != expected:
        diff = {k: (found.get(k), v) for k, v in expected.items() if found.get(k) != v}
        raise CheckpointMismatch(f"{path}: topology differs from config (checkpoint, config): {diff}")
    team = build_team(cfg)
    for name, net in _actor_networks(team, "actor").items():
        if name not in nets:
            raise CheckpointMismatch(f"{path}: missing network {name!r}")
        src = nets[name]
        shapes = [p.shape for p in src.params()]
        acts = [l.activation for l in src.layers]
        if shapes != [p.shape for p in net.params()] or acts != [l.activation for l in net.layers]:
            raise CheckpointMismatch(f"{path}: network {name!r} has a different shape")
        net.set_params(src.params())
    return team


# ----------------------------------------------------------- resumable state

def _rng_state(rng) -> dict:
    return rng.bit_generator.state


def _set_rng_state(rng, state: dict) -> None:
    rng.bit_generator.state = state


def save_state(path, learner: CtdeLearner, buffer: ReplayBuffer, rngs: dict, meta: dict) -> None:
    arrays = {}
    for prefix, team in (("team", learner.team), ("target_team", learner.target_team)):
        for i, p in enumerate(team.params()):
            arrays[f"{prefix}/{i}"] = p
    for prefix, nets in (("critic", learner.critics), ("target_critic", learner.target_critics)):
        for k, net in enumerate(nets):
            for i, p in enumerate(net.params()):
                arrays[f"{prefix}{k}/{i}"] = p
    opt_t = {}
    for prefix, opts in (("actor_opt", learner.actor_opts), ("critic_opt", learner.critic_opts)):
        for k, opt in enumerate(opts):
            arrays[f"{prefix}{k}/m"] = opt._m
            arrays[f"{prefix}{k}/v"] = opt._v
            opt_t[f"{prefix}{k}"] = opt.t
    for key, value in buffer.state().items():
        if key != "inserted":
            arrays[f"buffer/{key}"] = value
    meta = dict(meta, schema=STATE_SCHEMA, updates=learner.updates, opt_t=opt_t,
                buffer_inserted=buffer.inserted, rngs={k: _rng_state(r) for k, r in rngs.items()})
    tmp = Path(str(path) + ".tmp")
    with open(tmp, "wb") as fh:
        np.savez(fh, schema=np.array(STATE_SCHEMA), meta=np.array(json.dumps(meta)), **arrays)
    os.replace(tmp, path)


def load_state(path, learner: CtdeLearner, buffer: ReplayBuffer, rngs: dict) -> dict:
    with np.load(path) as data:
        if str(data["schema"]) != STATE_SCHEMA:
            raise CheckpointMismatch(f"{path}: unsupported state schema")
        meta = json.loads(str(data["meta"]))
        try:
            for prefix, team in (("team", learner.team), ("target_team", learner.target_team)):
                values = [data[f"{prefix}/{i}"] for i in range(len(team.params()))]
                _set_team_params(team, values)
            for prefix, nets in (("critic", learner.critics), ("target_critic", learner.target_critics)):
                for k, net in enumerate(nets):
                    net.set_params([data[f"{prefix}{k}/{i}"] for i in range(len(net.params()))])
            for prefix, opts in (("actor_opt", learner.actor_opts), ("critic_opt", learner.critic_opts)):
                for k, opt in enumerate(opts):
                    m, v = data[f"{prefix}{k}/m"], data[f"{prefix}{k}/v"]
                    if m.shape != opt._m.shape:
                        raise ValueError(f"optimizer {prefix}{k} size differs")
                    opt.load_state({"t": meta["opt_t"][f"{prefix}{k}"], "m": [m], "v": [v]})
            state = {key: data[f"buffer/{key}"] for key in ("obs", "next_obs", "actions", "rewards", "done")}
        except (KeyError, ValueError) as exc:
            raise CheckpointMismatch(f"{path}: {exc}") from None
    if state["obs"].shape[1:] != buffer.obs.shape[1:] or len(state["done"]) > buffer.capacity:
        raise CheckpointMismatch(f"{path}: replay buffer shape differs")
    buffer.load_state(dict(state, inserted=meta["buffer_inserted"]))
    learner.updates = int(meta["updates"])
    for key, rng in rngs.items():
        _set_rng_state(rng, meta["rngs"][key])
    return meta


def _set_team_params(team: Team, values) -> None:
    values = list(values)
    for net in team.nets:
        k = len(net.params())
        net.set_params(values[:k])
        values = values[k:]
    if values:
        raise ValueError("too many parameter arrays for team")


# ------------------------------------------------------------------ records

def _episode_record(epoch: int, seed: int, eps: float, res, steps_done: int) -> dict:
    steps = res.steps[1:]
    last = res.steps[-1]
    return {
        "epoch": epoch,
        "episode_seed": seed,
        "epsilon": eps,
        "env_steps": steps_done,
        "total_reward": res.total_reward,
        "agent_rewards": [float(r) for r in res.agent_rewards],
        "tau": float(np.mean([s["tau"] for s in steps])),
        "omega": float(np.mean([s["omega"] for s in steps])),
        "qos": float(np.mean([s["qos"] for s in steps])),
        "served": [float(np.mean([s["agents"][m]["served"] for s in steps])) for m in range(len(res.agent_rewards))],
        "energy_j": [a["energy_j"] for a in last["agents"]],
        "positions": [[u["x"], u["y"], u["z"], u["alive"]] for u in last["uavs"]],
        "loss": float(np.mean(res.losses)) if res.losses else None,
    }


def _step_record(episode: int, s: dict) -> dict:
    return {
        "episode": episode,
        "step": s["step"],
        "actions": s["actions"],
        "tau": s["tau"],
        "omega": s["omega"],
        "qos": s["qos"],
        "rewards": [a["r_total"] for a in s["agents"]],
        "served": [a["served"] for a in s["agents"]],
        "served_agents": s["served_agents"],
        "served_nonagents": s["served_nonagents"],
        "served_total": s["served_total"],
        "energy_j": [a["energy_j"] for a in s["agents"]],
        "uavs": s["uavs"],
    }


def evaluate(cfg: ScenarioConfig, team: Team, episodes: int | None = None, trace_path=None) -> dict:
    """Greedy (ε=0) rollouts on the evaluation episode stream; optional per-step trace."""
    episodes = cfg.train.eval_episodes if episodes is None else episodes
    world = build_world(cfg)
    act_rng = make_rngs(cfg.seed)["eval"]
    totals, taus, qos, energy, omega = [], [], [], [], []
    fh = None
    if trace_path is not None:
        fh = open(trace_path, "w")
        fh.write(json.dumps({"schema": TRACE_SCHEMA, "method": cfg.method.value, "episodes": episodes,
                             "m_agents": cfg.world.m_agents, "n_uavs": cfg.world.n_uavs}) + "\n")
    try:
        for e in range(episodes):
            res = run_episode(world, team, episode_seed(cfg.seed, "eval", e), 0.0, act_rng, keep_steps=True)
            steps = res.steps[1:]
            totals.append(res.total_reward)
            taus.append(np.mean([s["tau"] for s in steps]))
            qos.append(np.mean([s["qos"] for s in steps]))
            omega.append(np.mean([s["omega"] for s in steps]))
            energy.append(np.mean([a["energy_j"] for a in steps[-1]["agents"]]))
            if fh is not None:
                for s in steps:
                    fh.write(json.dumps(_step_record(e, s)) + "\n")
    finally:
        if fh is not None:
            fh.close()
    return {
        "schema": EVAL_SCHEMA,
        "method": cfg.method.value,
        "seed": cfg.seed,
        "episodes": episodes,
        "total_reward": float(np.mean(totals)) if totals else 0.0,
        "total_reward_std": float(np.std(totals)) if totals else 0.0,
        "support_rate": float(np.mean(taus)) if taus else 0.0,
        "qos": float(np.mean(qos)) if qos else 0.0,
        "omega": float(np.mean(omega)) if omega else 0.0,
        "residual_energy_j": float(np.mean(energy)) if energy else 0.0,
        "episode_rewards": [float(t) for t in totals],
    }


# ----------------------------------------------------------------- training

def default_run_dir(cfg: ScenarioConfig) -> Path:
    return Path(cfg.output_dir) / f"{cfg.method.value}-seed{cfg.seed}"


def run_training(cfg: ScenarioConfig, out_dir=None, resume: bool = False, seed_source: str = "config",
                 env_seed: str | None = None, evaluate_final: bool = True) -> Path:
    """Train ``cfg.method`` for ``cfg.train.epochs`` episodes and write the run directory."""
    run_dir = Path(out_dir) if out_dir is not None else default_run_dir(cfg)
    run_dir.mkdir(parents=True, exist_ok=True)
    tc = cfg.train
    chash = config_hash(cfg)
    trained = cfg.method != Method.RANDOM
    paths = {
        "config": run_dir / "config.ini",
        "manifest": run_dir / "manifest.json",
        "metrics": run_dir / "metrics.jsonl",
        "checkpoint": run_dir / "checkpoint.ckpt",
        "state": run_dir / "state.npz",
        "evaluation": run_dir / "evaluation.json",
    }

    rngs = make_rngs(cfg.seed)
    team = build_team(cfg, rngs["policy-init"])
    learner = CtdeLearner(team, cfg.world.obs_dim, tc, rngs["policy-init"]) if trained else None
    buffer = ReplayBuffer(tc.buffer_capacity, cfg.world.m_agents, cfg.world.obs_dim) if trained else None
    loop_rngs = {"exploration": rngs["exploration"], "replay": rngs["replay"]}

    start, env_steps = 0, 0
    if resume and paths["manifest"].exists():
        manifest = read_manifest(run_dir)
        if manifest.get("config_hash") != chash:
            raise CheckpointMismatch(f"{run_dir}: config differs from the run being resumed")
        if trained and paths["state"].exists():
            meta = load_state(paths["state"], learner, buffer, loop_rngs)
            start, env_steps = int(meta["epoch"]), int(meta["env_steps"])
        log.info("resuming %s at epoch %d", run_dir, start)

    paths["config"].write_text(dump_config(cfg))

    def manifest(epoch, status):
        files = {k: p.name for k, p in paths.items() if k != "manifest" and p.exists()}
        _write_json_line(paths["manifest"], {
            "schema": MANIFEST_SCHEMA,
            "package_version": __version__,
            "status": status,
            "method": cfg.method.value,
            "mode": cfg.mode.value,
            "config_hash": chash,
            "seed": cfg.seed,
            "seed_source": seed_source,
            "env_seed_override": env_seed,
            "epoch": epoch,
            "epochs": tc.epochs,
            "env_steps": env_steps,
            "updates": learner.updates if learner else 0,
            "files": files,
        })

    # metrics: keep the header and records of completed epochs only
    header = json.dumps({"schema": METRICS_SCHEMA, "method": cfg.method.value, "seed": cfg.seed,
                         "m_agents": cfg.world.m_agents, "config_hash": chash})
    kept = []
    if start > 0 and paths["metrics"].exists():
        _, records = _read_jsonl(paths["metrics"], METRICS_SCHEMA)
        kept = [json.dumps(r) for r in records if r["epoch"] < start]
    paths["metrics"].write_text("\n".join([header] + kept) + "\n")
    manifest(start, "running")

    world = build_world(cfg)
    with open(paths["metrics"], "a") as metrics:
        for epoch in range(start, tc.epochs):
            eps = tc.epsilon(epoch) if trained else 1.0
            seed = episode_seed(cfg.seed, "world", epoch)
            res = run_episode(world, team, seed, eps, loop_rngs["exploration"], learner, buffer,
                              loop_rngs["replay"], keep_steps=True)
            env_steps += cfg.world.episode_steps
            metrics.write(json.dumps(_episode_record(epoch, seed, eps, res, env_steps)) + "\n")
            if trained and (epoch + 1) % tc.target_update_cycle == 0:
                learner.sync_targets()
            if (epoch + 1) % max(1, tc.epochs // 20) == 0:
                log.info("epoch %d/%d reward %.2f", epoch + 1, tc.epochs, res.total_reward)
            if trained and tc.checkpoint_every and (epoch + 1) % tc.checkpoint_every == 0 and epoch + 1 < tc.epochs:
                metrics.flush()
                save_state(paths["state"], learner, buffer, loop_rngs, {"epoch": epoch + 1, "env_steps": env_steps})
                manifest(epoch + 1, "running")

    if trained:
        save_team_checkpoint(paths["checkpoint"], cfg, learner, tc.epochs)
        if tc.checkpoint_every:
            save_state(paths["state"], learner, buffer, loop_rngs, {"epoch": tc.epochs, "env_steps": env_steps})
    if evaluate_final:
        _write_json_line(paths["evaluation"], evaluate(cfg, team))
    manifest(tc.epochs, "complete")
    return run_dir


def run_inference(cfg: ScenarioConfig, checkpoint, out_dir=None, episodes: int | None = None) -> Path:
    """Greedy rollouts of a checkpointed team; writes ``trace.jsonl`` and ``evaluation.json``."""
    team = load_team(cfg, checkpoint)
    out = Path(out_dir) if out_dir is not None else Path(checkpoint).parent / "eval"
    out.mkdir(parents=True, exist_ok=True)
    summary = evaluate(cfg, team, episodes, trace_path=out / "trace.jsonl")
    _write_json_line(out / "evaluation.json", summary)
    return out


# ---------------------------------------------------------------- comparison

def compare_methods(cfg: ScenarioConfig, methods, seeds, out_dir=None) -> Path:
    """Train and evaluate every (method, seed) cell; write ``summary.tsv`` and ``cells.tsv``.

    Random is evaluated without training epochs.  A failing cell is recorded
    and the remaining cells still run.
    """
    methods = [Method(m) for m in methods]
    seeds = [int(s) for s in seeds]
    if not methods or not seeds:
        raise ConfigError("compare needs at least one method and one seed")
    out = Path(out_dir) if out_dir is not None else Path(cfg.output_dir) / "compare"
    out.mkdir(parents=True, exist_ok=True)
    cells = []
    for method in methods:
        for seed in seeds:
            cell_cfg = cfg.with_method(method).with_seed(seed)
            if method == Method.RANDOM:
                cell_cfg = replace(cell_cfg, train=replace(cell_cfg.train, epochs=0))
            cell_dir = out / method.value / f"seed-{seed}"
            try:
                run_training(cell_cfg, cell_dir)
                ev = json.loads((cell_dir / "evaluation.json").read_text())
                cells.append({"method": method.value, "seed": seed, "status": "ok", **ev})
            except Exception as exc:  # recorded per cell, the sweep continues
                log.error("cell %s seed %d failed: %s", method.value, seed, exc)
                cells.append({"method": method.value, "seed": seed, "status": f"error: {type(exc).__name__}: {exc}"})

    cols = ("support_rate", "qos", "residual_energy_j", "total_reward")
    lines = [f"# {SUMMARY_SCHEMA}", "\t".join(["method", "seed", "status", *cols])]
    for c in cells:
        vals = [repr(c[k]) if c["status"] == "ok" else "nan" for k in cols]
        lines.append("\t".join([c["method"], str(c["seed"]), c["status"].replace("\t", " ").replace("\n", " "), *vals]))
    (out / "cells.tsv").write_text("\n".join(lines) + "\n")

    head = ["method", "n_seeds", "n_ok"]
    for k in cols:
        head += [f"{k}_mean", f"{k}_std"]
    head += ["flops", "failures"]
    lines = [f"# {SUMMARY_SCHEMA}", "\t".join(head)]
    for method in methods:
        mine = [c for c in cells if c["method"] == method.value]
        ok = [c for c in mine if c["status"] == "ok"]
        row = [method.value, str(len(mine)), str(len(ok))]
        for k in cols:
            vals = [c[k] for c in ok]
            row += [repr(float(np.mean(vals))) if vals else "nan", repr(float(np.std(vals))) if vals else "nan"]
        row.append(str(policy_flops(cfg.with_method(method))["method"]))
        row.append(",".join(str(c["seed"]) for c in mine if c["status"] != "ok") or "-")
        lines.append("\t".join(row))
    summary = out / "summary.tsv"
    summary.write_text("\n".join(lines) + "\n")
    return summary


def read_table(path) -> tuple[str, list[str], list[list[str]]]:
    """Parse a tabular output file: (schema line, column names, rows as strings)."""
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].startswith("# "):
        raise ValueError(f"{path}: missing schema header")
    cols = lines[1].split("\t")
    return lines[0][2:], cols, [line.split("\t") for line in lines[2:]]


# ------------------------------------------------------------------- export

def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _find_trace(run_dir: Path) -> Path:
    for candidate in (run_dir / "trace.jsonl", run_dir / "eval" / "trace.jsonl"):
        if candidate.exists():
            return candidate
    raise ConfigError(f"{run_dir}: no trace.jsonl found; run `eval` on the checkpoint first")


def export_figure_data(run_dir, which: str, out=None) -> Path:
    """Write one tab-separated table for figure ``which``; re-running rewrites identical bytes."""
    if which not in FIGURE_KEYS:
        raise ConfigError(f"unknown figure key {which!r}; choose from {', '.join(FIGURE_KEYS)}")
    run_dir = Path(run_dir)
    if which == "trajectory":
        header, records = _read_jsonl(_find_trace(run_dir), TRACE_SCHEMA)
        cols = ["episode", "step", "uav_id", "x", "y", "z", "alive"]
        rows = [[r["episode"], r["step"], u["id"], u["x"], u["y"], u["z"], u["alive"]]
                for r in records for u in r["uavs"]]
    else:
        header, records = _read_jsonl(run_dir / "metrics.jsonl", METRICS_SCHEMA)
        m = header["m_agents"]
        if which == "reward_curve":
            cols = ["epoch", "total_reward"] + [f"r_b{i + 1}" for i in range(m)]
            rows = [[r["epoch"], r["total_reward"], *r["agent_rewards"]] for r in records]
        elif which == "support_rate":
            cols, rows = ["epoch", "tau"], [[r["epoch"], r["tau"]] for r in records]
        elif which == "qos":
            cols, rows = ["epoch", "qos"], [[r["epoch"], r["qos"]] for r in records]
        elif which == "overlap":
            cols, rows = ["epoch", "omega"], [[r["epoch"], r["omega"]] for r in records]
        else:
            cols = ["epoch"] + [f"energy_b{i + 1}_j" for i in range(m)]
            rows = [[r["epoch"], *r["energy_j"]] for r in records]
    path = Path(out) if out is not None else run_dir / "figures" / f"{which}.tsv"
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"# {FIGURE_SCHEMA} figure={which}", "\t".join(cols)]
    lines += ["\t".join(_fmt(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")
    return path
