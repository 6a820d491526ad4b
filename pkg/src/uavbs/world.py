"""Multi-UAV mobile access environment.

Agent UAVs ``0 .. M-1`` are controlled (``M-1`` is the leader), UAVs
``M .. M+K-1`` are fixed non-agents that may malfunction.  A step applies
agent moves and their energy cost, drifts the UEs, rolls malfunctions,
re-associates UEs and scores the result.
"""

from __future__ import annotations

import enum
import math
import zlib
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from . import radio
from .energy import EnergyQueue, UavPowerParams, cruise_power_w, hover_power_w, queue_step
from .radio import AntennaPattern, LinkBudget, McsTable, ServiceType


class Action(enum.IntEnum):
    HOVER = 0
    X_PLUS = 1
    X_MINUS = 2
    Y_PLUS = 3
    Y_MINUS = 4
    Z_UP = 5
    Z_DOWN = 6


N_ACTIONS = len(Action)
_XY_MOVES = {
    Action.X_PLUS: (1.0, 0.0),
    Action.X_MINUS: (-1.0, 0.0),
    Action.Y_PLUS: (0.0, 1.0),
    Action.Y_MINUS: (0.0, -1.0),
}


class UavKind(enum.IntEnum):
    LEADER = 0
    AGENT = 1
    NONAGENT = 2


def derive_rng(seed: int, *labels) -> np.random.Generator:
    """Independent generator keyed by ``seed`` and a fixed label path."""
    keys = [int(seed) & 0xFFFFFFFF]
    for label in labels:
        keys.append(zlib.crc32(label.encode()) if isinstance(label, str) else int(label) & 0xFFFFFFFF)
    return np.random.default_rng(np.random.SeedSequence(keys))


@dataclass(frozen=True)
class WorldConfig:
    n_ues: int = 25
    m_agents: int = 4
    k_nonagents: int = 3
    grid_m: tuple = (6000.0, 6000.0, 2500.0)
    altitude_levels: tuple = (1500.0, 2000.0, 2500.0)
    beamwidth_deg: float = 80.0
    step_dt_s: float = 45.0
    episode_steps: int = 40
    uav_speed_mps: float = 20.0
    malfunction_prob: float = 0.03
    obs_radius_m: float = 3000.0
    fomdp: bool = False
    seed: int = 0
    nonagent_radius_m: float = 3000.0
    nonagent_alt_m: float = 2000.0
    ue_mean_m: float = 1500.0
    ue_alt_mean_m: float = 20.0
    ue_max_speed_mps: float = 3.0 / 3.6
    service_weights: tuple = (1.0, 1.0, 1.0, 1.0)
    rate_model: str = "shannon"
    overlap_formula: str = "multi-coverage"
    overlap_method: str = "raster"
    overlap_samples: int = 10_000
    coverage_formula: str = "cone"
    energy_reward: str = "fraction"
    cruise_formula: str = "standard"

    def __post_init__(self):
        if self.m_agents < 2:
            raise ValueError("need a leader and at least one follower (m_agents >= 2)")
        if self.n_ues < 1 or self.k_nonagents < 0:
            raise ValueError("n_ues must be >= 1 and k_nonagents >= 0")
        if list(self.altitude_levels) != sorted(self.altitude_levels) or not self.altitude_levels:
            raise ValueError("altitude_levels must be a non-empty ascending sequence")
        if self.episode_steps < 1 or self.step_dt_s <= 0:
            raise ValueError("episode_steps and step_dt_s must be positive")
        if not 0.0 <= self.malfunction_prob <= 1.0:
            raise ValueError("malfunction_prob must be a probability")
        if len(self.grid_m) != 3 or min(self.grid_m) <= 0:
            raise ValueError("grid_m must hold three positive extents")
        if len(self.service_weights) != len(ServiceType) or sum(self.service_weights) <= 0:
            raise ValueError("service_weights needs one non-negative weight per service type")
        choices = {
            "rate_model": ("shannon", "mcs"),
            "overlap_formula": ("multi-coverage", "as-printed"),
            "overlap_method": ("raster", "monte-carlo"),
            "coverage_formula": ("cone", "as-printed"),
            "energy_reward": ("fraction", "joules"),
            "cruise_formula": ("standard", "as-printed"),
        }
        for name, allowed in choices.items():
            if getattr(self, name) not in allowed:
                raise ValueError(f"{name} must be one of {allowed}, got {getattr(self, name)!r}")

    @property
    def n_uavs(self) -> int:
        return self.m_agents + self.k_nonagents

    @property
    def leader(self) -> int:
        return self.m_agents - 1

    @property
    def obs_dim(self) -> int:
        return 4 + self.m_agents + UE_SLOT * self.n_ues + UAV_SLOT * (self.m_agents - 1 + self.k_nonagents)


UE_SLOT = 7
UAV_SLOT = 6


@dataclass
class WorldState:
    ue_pos: np.ndarray
    ue_service: np.ndarray
    ue_velocity: np.ndarray
    uav_pos: np.ndarray
    uav_kind: np.ndarray
    energy_j: np.ndarray
    alive: np.ndarray
    served_by: np.ndarray
    rate_mbps: np.ndarray
    step: int = 0
    energy_cap_j: float = EnergyQueue.full().q_init_joules

    def copy(self) -> "WorldState":
        return WorldState(
            **{k: (v.copy() if isinstance(v, np.ndarray) else v) for k, v in self.__dict__.items()}
        )


@dataclass
class UavState:
    """Single-UAV view used by :func:`apply_action`."""

    id: int
    kind: UavKind
    pos: np.ndarray
    energy: EnergyQueue
    alive: bool = True


def _level_index(z, levels) -> int:
    return int(np.argmin(np.abs(np.asarray(levels) - z)))


def apply_action(u: UavState, a: Action, cfg: WorldConfig, power: UavPowerParams = UavPowerParams()):
    """Move one agent UAV and discharge its battery.

    Returns ``(new_state, acted)``; ``acted`` is False for dead or non-agent UAVs,
    which are left untouched.
    """
    if not u.alive or u.kind == UavKind.NONAGENT:
        return u, False
    a = Action(a)
    pos = np.array(u.pos, dtype=float)
    step_m = cfg.uav_speed_mps * cfg.step_dt_s
    if a in _XY_MOVES:
        dx, dy = _XY_MOVES[a]
        pos[0] = min(max(pos[0] + dx * step_m, 0.0), cfg.grid_m[0])
        pos[1] = min(max(pos[1] + dy * step_m, 0.0), cfg.grid_m[1])
    elif a in (Action.Z_UP, Action.Z_DOWN):
        levels = cfg.altitude_levels
        i = _level_index(pos[2], levels) + (1 if a == Action.Z_UP else -1)
        pos[2] = levels[min(max(i, 0), len(levels) - 1)]
    if a == Action.HOVER:
        watts = hover_power_w(power)
    else:
        watts = cruise_power_w(cfg.uav_speed_mps, power, cfg.cruise_formula)
    energy = queue_step(u.energy, watts, cfg.step_dt_s)
    return replace(u, pos=pos, energy=energy, alive=not energy.empty), True


def associate(
    state: WorldState,
    cfg: WorldConfig,
    budget: LinkBudget = LinkBudget(),
) -> np.ndarray:
    """Serving UAV index per UE (``-1`` when uncovered).

    A UE is a candidate for every live UAV whose footprint at the UE's altitude
    contains it and attaches to the strongest of them; ties go to the lowest id.
    """
    ue = state.ue_pos
    uav = state.uav_pos
    diff = ue[:, None, :] - uav[None, :, :]
    horiz = np.hypot(diff[..., 0], diff[..., 1])
    radius = radio.coverage_radius_m(uav[None, :, 2], ue[:, None, 2], cfg.beamwidth_deg, cfg.coverage_formula)
    covered = state.alive[None, :] & (radius > 0) & (horiz <= radius)
    dist = np.maximum(np.linalg.norm(diff, axis=-1), radio.D_MIN_M)
    rx = radio.rx_power_dbm(dist, budget)
    score = np.where(covered, rx, -np.inf)
    best = np.argmax(score, axis=1)
    return np.where(covered.any(axis=1), best, -1)


def link_rates_mbps(
    state: WorldState,
    cfg: WorldConfig,
    budget: LinkBudget = LinkBudget(),
    pattern: AntennaPattern = AntennaPattern(),
    mcs: McsTable = radio.IEEE_80211AD_MCS,
) -> np.ndarray:
    """Achievable rate of every served UE under co-channel interference.

    Each UAV time-shares one beam across its links, so another UAV contributes
    the mean interference of its beams toward the victim.
    """
    served_by = state.served_by
    rates = np.zeros(len(served_by))
    links = np.flatnonzero(served_by >= 0)
    if links.size == 0:
        return rates
    servers = served_by[links]
    tx = state.uav_pos[servers]
    rx = state.ue_pos[links]
    d_own = np.maximum(np.linalg.norm(rx - tx, axis=1), radio.D_MIN_M)
    rx_dbm = radio.rx_power_dbm(d_own, budget)
    boresight = (rx - tx) / d_own[:, None]

    # pair[v, k]: power from link k's transmitter, aimed along its boresight, at victim v
    to_victim = rx[:, None, :] - tx[None, :, :]
    d_pair = np.maximum(np.linalg.norm(to_victim, axis=-1), radio.D_MIN_M)
    phi, theta = radio.boresight_angles(boresight, to_victim)
    gain = radio.antenna_gain_dbi(phi, theta, pattern)
    pair_mw = radio.dbm_to_mw(gain + budget.p_tx_dbm - radio.path_loss_db(d_pair, budget))
    n_links = np.bincount(servers, minlength=state.uav_pos.shape[0])[servers]
    weight = (servers[None, :] != servers[:, None]) / n_links[None, :]
    interf = np.sum(pair_mw * weight, axis=1)

    n_mw = radio.noise_mw(budget)
    if cfg.rate_model == "shannon":
        rates[links] = radio.capacity_bps(radio.dbm_to_mw(rx_dbm), interf, n_mw, budget.bandwidth_hz) / 1e6
    else:
        effective = rx_dbm - 10.0 * np.log10(1.0 + interf / n_mw)
        rates[links] = mcs.rate_mbps(effective)
    return rates


def support_rate(state: WorldState) -> float:
    return float(np.mean(state.served_by >= 0))


def _raster_counts(centers, radii, lo, hi, side):
    """Per-cell disk coverage count on a ``side x side`` raster of cell centers.

    Each disk covers a contiguous run of cells in every raster row, so counts
    are accumulated from run endpoints instead of testing every cell.
    """
    w = (hi - lo) / side
    ys = lo[1] + (np.arange(side) + 0.5) * w[1]
    dy2 = (ys[:, None] - centers[None, :, 1]) ** 2
    r2 = radii[None, :] ** 2
    half = np.sqrt(np.maximum(r2 - dy2, 0.0))
    hit = dy2 <= r2
    start = np.ceil((centers[None, :, 0] - half - lo[0]) / w[0] - 0.5).astype(int)
    stop = np.floor((centers[None, :, 0] + half - lo[0]) / w[0] - 0.5).astype(int) + 1
    start = np.clip(start, 0, side)
    stop = np.clip(stop, 0, side)
    hit &= stop > start
    base = np.broadcast_to(np.arange(side)[:, None] * (side + 1), hit.shape)[hit]
    n = side * (side + 1)
    edges = np.bincount(base + start[hit], minlength=n) - np.bincount(base + stop[hit], minlength=n)
    return np.cumsum(edges.reshape(side, side + 1)[:, :side], axis=1).ravel()


def disk_overlap(
    centers,
    radii,
    samples: int = 10_000,
    method: str = "raster",
    formula: str = "multi-coverage",
    bounds=None,
    rng: np.random.Generator | None = None,
) -> float:
    """Overlap ratio of a set of ground disks.

    ``multi-coverage``: area covered by two or more disks over the union area.
    ``as-printed``: one minus the common intersection over the union.
    Areas are estimated on a regular raster (or uniform random points) over
    the disks' bounding box, optionally clipped to ``bounds = (xmax, ymax)``.
    """
    centers = np.asarray(centers, dtype=float).reshape(-1, 2)
    radii = np.asarray(radii, dtype=float).reshape(-1)
    keep = radii > 0
    centers, radii = centers[keep], radii[keep]
    if len(radii) == 0:
        return 0.0
    lo = np.min(centers - radii[:, None], axis=0)
    hi = np.max(centers + radii[:, None], axis=0)
    if bounds is not None:
        lo = np.maximum(lo, 0.0)
        hi = np.minimum(hi, np.asarray(bounds, dtype=float))
        if np.any(hi <= lo):
            return 0.0
    if method == "raster":
        count = _raster_counts(centers, radii, lo, hi, max(1, int(math.ceil(math.sqrt(samples)))))
    elif method == "monte-carlo":
        if rng is None:
            raise ValueError("monte-carlo overlap needs an rng")
        points = lo + rng.random((samples, 2)) * (hi - lo)
        d2 = (points[:, None, 0] - centers[None, :, 0]) ** 2 + (points[:, None, 1] - centers[None, :, 1]) ** 2
        count = np.count_nonzero(d2 <= radii[None, :] ** 2, axis=1)
    else:
        raise ValueError(f"unknown overlap method {method!r}")
    union = np.count_nonzero(count >= 1)
    if union == 0:
        return 0.0
    if formula == "multi-coverage":
        return np.count_nonzero(count >= 2) / union
    if formula == "as-printed":
        return 1.0 - np.count_nonzero(count == len(radii)) / union
    raise ValueError(f"unknown overlap formula {formula!r}")


def overlap_degree(state: WorldState, cfg: WorldConfig, rng: np.random.Generator | None = None) -> float:
    live = state.alive
    if not live.any():
        return 0.0
    pos = state.uav_pos[live]
    radii = radio.coverage_radius_m(pos[:, 2], 0.0, cfg.beamwidth_deg, cfg.coverage_formula)
    return disk_overlap(
        pos[:, :2], radii, cfg.overlap_samples, cfg.overlap_method, cfg.overlap_formula,
        bounds=cfg.grid_m[:2], rng=rng,
    )


def reward_energy(energy_j: float, capacity_j: float, mode: str = "fraction") -> float:
    e = energy_j / capacity_j if mode == "fraction" else energy_j
    return max(0.0, e)


def reward_quality(uav_id: int, state: WorldState) -> float:
    mine = state.served_by == uav_id
    if not mine.any():
        return 0.0
    return float(np.sum(radio.quality(state.rate_mbps[mine], state.ue_service[mine])))


def reward_common(tau: float, omega: float) -> float:
    return tau / (1.0 + omega)


def reward_total(r_energy: float, r_quality: float, r_common: float) -> float:
    return r_energy * r_quality * r_common


@dataclass
class StepOutcome:
    rewards: np.ndarray
    r_common: float
    observations: np.ndarray
    done: bool
    metrics: dict = field(default_factory=dict)


def observe(state: WorldState, agent_id: int, cfg: WorldConfig) -> np.ndarray:
    """Fixed-width observation vector of one agent.

    Layout: own position (normalized), own energy fraction, agent one-hot, then
    distance-sorted slots for UEs ``[present, dx, dy, dz, dist, mine, other]``,
    other agents and non-agents ``[present, alive, dx, dy, dz, dist]``.
    Entities beyond ``obs_radius_m`` (closed ball) are zero slots unless the
    world is fully observable.
    """
    scale = np.asarray(cfg.grid_m, dtype=float)
    diag = float(np.linalg.norm(scale))
    me = state.uav_pos[agent_id]
    out = np.zeros(cfg.obs_dim)
    out[0:3] = me / scale
    out[3] = state.energy_j[agent_id] / state.energy_cap_j
    out[4 + agent_id] = 1.0
    cursor = 4 + cfg.m_agents

    def visible(dist):
        if cfg.fomdp:
            return np.ones(dist.shape, dtype=bool)
        if cfg.obs_radius_m <= 0:
            return np.zeros(dist.shape, dtype=bool)
        return dist <= cfg.obs_radius_m

    rel = state.ue_pos - me
    dist = np.linalg.norm(rel, axis=1)
    order = np.argsort(dist, kind="stable")
    vis = visible(dist)[order]
    block = np.zeros((cfg.n_ues, UE_SLOT))
    block[:, 0] = 1.0
    block[:, 1:4] = rel[order] / scale
    block[:, 4] = dist[order] / diag
    sb = state.served_by[order]
    block[:, 5] = sb == agent_id
    block[:, 6] = (sb >= 0) & (sb != agent_id)
    block[~vis] = 0.0
    # present entities first, nearest first
    block = np.concatenate([block[vis], block[~vis]])
    out[cursor:cursor + block.size] = block.ravel()
    cursor += block.size

    for ids in (
        [i for i in range(cfg.m_agents) if i != agent_id],
        list(range(cfg.m_agents, cfg.n_uavs)),
    ):
        if not ids:
            continue
        ids = np.asarray(ids)
        rel = state.uav_pos[ids] - me
        dist = np.linalg.norm(rel, axis=1)
        order = np.argsort(dist, kind="stable")
        vis = visible(dist)[order]
        block = np.zeros((len(ids), UAV_SLOT))
        block[:, 0] = 1.0
        block[:, 1] = state.alive[ids[order]]
        block[:, 2:5] = rel[order] / scale
        block[:, 5] = dist[order] / diag
        block[~vis] = 0.0
        block = np.concatenate([block[vis], block[~vis]])
        out[cursor:cursor + block.size] = block.ravel()
        cursor += block.size
    return out


class UavWorld:
    """Stateful episode executor around :class:`WorldState`."""

    def __init__(
        self,
        cfg: WorldConfig = WorldConfig(),
        budget: LinkBudget = LinkBudget(),
        pattern: AntennaPattern = AntennaPattern(),
        mcs: McsTable = radio.IEEE_80211AD_MCS,
        power: UavPowerParams = UavPowerParams(),
    ):
        self.cfg = cfg
        self.budget = budget
        self.pattern = pattern
        self.mcs = mcs
        self.power = power
        self.state: WorldState | None = None
        self._omega_key = None
        self._omega = 0.0
        self.reset(cfg.seed)

    def reset(self, seed: int | None = None) -> np.ndarray:
        cfg = self.cfg
        seed = cfg.seed if seed is None else seed
        place = derive_rng(seed, "world")
        self._motion_rng = derive_rng(seed, "ue-motion")
        self._malfunction_rng = derive_rng(seed, "malfunction")
        self._overlap_rng = derive_rng(seed, "overlap")

        gx, gy, gz = cfg.grid_m
        ue = np.empty((cfg.n_ues, 3))
        ue[:, 0] = np.minimum(place.exponential(cfg.ue_mean_m, cfg.n_ues), gx)
        ue[:, 1] = np.minimum(place.exponential(cfg.ue_mean_m, cfg.n_ues), gy)
        ue[:, 2] = np.minimum(place.exponential(cfg.ue_alt_mean_m, cfg.n_ues), gz)
        w = np.asarray(cfg.service_weights, dtype=float)
        service = place.choice(len(ServiceType), size=cfg.n_ues, p=w / w.sum())

        center = np.array([gx / 2.0, gy / 2.0])
        mid = cfg.altitude_levels[len(cfg.altitude_levels) // 2]
        uav = np.empty((cfg.n_uavs, 3))
        uav[: cfg.m_agents] = [center[0], center[1], mid]
        for k in range(cfg.k_nonagents):
            ang = 2.0 * math.pi * k / cfg.k_nonagents
            xy = center + cfg.nonagent_radius_m * np.array([math.cos(ang), math.sin(ang)])
            uav[cfg.m_agents + k] = [
                min(max(xy[0], 0.0), gx), min(max(xy[1], 0.0), gy), cfg.nonagent_alt_m,
            ]
        kind = np.full(cfg.n_uavs, UavKind.NONAGENT, dtype=int)
        kind[: cfg.m_agents] = UavKind.AGENT
        kind[cfg.leader] = UavKind.LEADER
        cap = EnergyQueue.full().q_init_joules

        self.state = WorldState(
            ue_pos=ue,
            ue_service=service,
            ue_velocity=np.zeros((cfg.n_ues, 3)),
            uav_pos=uav,
            uav_kind=kind,
            energy_j=np.full(cfg.n_uavs, cap),
            alive=np.ones(cfg.n_uavs, dtype=bool),
            served_by=np.full(cfg.n_ues, -1),
            rate_mbps=np.zeros(cfg.n_ues),
            step=0,
            energy_cap_j=cap,
        )
        self._refresh_links()
        return self.observations()

    @property
    def done(self) -> bool:
        return self.state.step >= self.cfg.episode_steps

    def _refresh_links(self):
        s = self.state
        s.served_by = associate(s, self.cfg, self.budget)
        s.rate_mbps = link_rates_mbps(s, self.cfg, self.budget, self.pattern, self.mcs)

    def observations(self) -> np.ndarray:
        return np.stack([observe(self.state, m, self.cfg) for m in range(self.cfg.m_agents)])

    def _move_agents(self, actions):
        s = self.state
        for m, a in enumerate(actions):
            u = UavState(m, UavKind(s.uav_kind[m]), s.uav_pos[m], EnergyQueue(s.energy_j[m], s.energy_cap_j), bool(s.alive[m]))
            u, acted = apply_action(u, a, self.cfg, self.power)
            if acted:
                s.uav_pos[m] = u.pos
                s.energy_j[m] = u.energy.q_joules
                s.alive[m] = u.alive

    def _move_ues(self):
        cfg, s = self.cfg, self.state
        heading = self._motion_rng.uniform(0.0, 2.0 * math.pi, cfg.n_ues)
        speed = self._motion_rng.uniform(0.0, cfg.ue_max_speed_mps, cfg.n_ues)
        s.ue_velocity = np.column_stack([speed * np.cos(heading), speed * np.sin(heading), np.zeros(cfg.n_ues)])
        s.ue_pos[:, :2] += s.ue_velocity[:, :2] * cfg.step_dt_s
        np.clip(s.ue_pos[:, 0], 0.0, cfg.grid_m[0], out=s.ue_pos[:, 0])
        np.clip(s.ue_pos[:, 1], 0.0, cfg.grid_m[1], out=s.ue_pos[:, 1])

    def _malfunction(self):
        cfg, s = self.cfg, self.state
        ids = np.arange(cfg.m_agents, cfg.n_uavs)
        rolls = self._malfunction_rng.random(len(ids))
        s.alive[ids] &= rolls >= cfg.malfunction_prob

    def step(self, actions: Sequence[int]) -> StepOutcome:
        cfg = self.cfg
        if self.done:
            raise RuntimeError("episode is finished; call reset()")
        if len(actions) != cfg.m_agents:
            raise ValueError(f"expected {cfg.m_agents} actions, got {len(actions)}")
        for a in actions:
            if not 0 <= int(a) < N_ACTIONS:
                raise ValueError(f"invalid action {a}")
        self._move_agents(actions)
        self._move_ues()
        self._malfunction()
        self._refresh_links()
        self.state.step += 1
        metrics = self.score()
        rewards = np.array([a["r_total"] for a in metrics["agents"]])
        return StepOutcome(
            rewards=rewards,
            r_common=metrics["r_common"],
            observations=self.observations(),
            done=self.done,
            metrics=metrics,
        )

    def score(self) -> dict:
        """Rewards and service statistics of the current state."""
        cfg, s = self.cfg, self.state
        tau = support_rate(s)
        if cfg.overlap_method == "monte-carlo":
            omega = overlap_degree(s, cfg, self._overlap_rng)
        else:
            # the raster estimate depends only on UAV positions and liveness
            key = (s.uav_pos.tobytes(), s.alive.tobytes())
            if key != self._omega_key:
                self._omega_key, self._omega = key, overlap_degree(s, cfg)
            omega = self._omega
        r_c = reward_common(tau, omega)
        agents = []
        for m in range(cfg.m_agents):
            r_e = reward_energy(s.energy_j[m], s.energy_cap_j, cfg.energy_reward) if s.alive[m] else 0.0
            r_u = reward_quality(m, s)
            agents.append(
                {
                    "r_e": r_e,
                    "r_u": r_u,
                    "r_total": reward_total(r_e, r_u, r_c),
                    "energy_j": float(s.energy_j[m]),
                    "served": int(np.count_nonzero(s.served_by == m)),
                }
            )
        served = s.served_by >= 0
        served_agents = int(np.count_nonzero(served & (s.served_by < cfg.m_agents)))
        qos = float(np.sum(radio.quality(s.rate_mbps[served], s.ue_service[served]))) if served.any() else 0.0
        return {
            "step": s.step,
            "tau": tau,
            "omega": omega,
            "r_common": r_c,
            "qos": qos,
            "agents": agents,
            "served_total": int(np.count_nonzero(served)),
            "served_agents": served_agents,
            "served_nonagents": int(np.count_nonzero(served)) - served_agents,
            "uavs": [
                {"id": i, "x": float(p[0]), "y": float(p[1]), "z": float(p[2]), "alive": bool(s.alive[i])}
                for i, p in enumerate(s.uav_pos)
            ],
        }
