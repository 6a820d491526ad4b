"""Policies, centralized critic, replay buffer and the CTDE actor-critic learner."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .nn import ACTIVATION_FLOPS, Adam, Mlp, flops_count
from .world import N_ACTIONS, UavWorld, derive_rng


class Method(str, enum.Enum):
    PROPOSED = "proposed"
    RANDOM = "random"
    COMP1 = "comp1"
    COMP2 = "comp2"


@dataclass(frozen=True)
class TrainConfig:
    gamma: float = 0.99
    lr: float = 1e-3
    batch_size: int = 32
    buffer_capacity: int = 50_000
    warmup: int = 1_000
    eps_start: float = 1.0
    eps_end: float = 0.05
    eps_decay_frac: float = 0.6
    target_update_cycle: int = 20
    epochs: int = 50_000
    seed: int = 0
    update_period: int = 1
    hidden: int = 64
    depth: int = 6
    comm_layers: int = 4
    comm_mean: str = "exclude-self"
    leader_sees_self: bool = True
    share_follower_weights: bool = True
    critic_sharing: str = "shared"
    entropy_coef: float = 1.0
    reward_scale: float = 1.0
    eval_episodes: int = 20
    checkpoint_every: int = 0

    def __post_init__(self):
        if not 0.0 < self.gamma < 1.0:
            raise ValueError("gamma must lie in (0, 1)")
        if self.target_update_cycle < 1 or self.update_period < 1:
            raise ValueError("target_update_cycle and update_period must be >= 1")
        if self.batch_size < 1 or self.buffer_capacity < self.batch_size:
            raise ValueError("buffer_capacity must hold at least one batch")
        if self.warmup < self.batch_size:
            raise ValueError("warmup must be at least one batch")
        if self.epochs < 0 or self.depth < 2 or self.comm_layers < 0:
            raise ValueError("invalid epochs/depth/comm_layers")
        if self.comm_mean not in ("exclude-self", "exclude-leader"):
            raise ValueError(f"unknown comm_mean {self.comm_mean!r}")
        if self.critic_sharing not in ("shared", "per-agent"):
            raise ValueError(f"unknown critic_sharing {self.critic_sharing!r}")

    def epsilon(self, epoch: int) -> float:
        horizon = self.eps_decay_frac * self.epochs
        if horizon <= 0:
            return self.eps_end
        frac = min(1.0, epoch / horizon)
        return self.eps_start + frac * (self.eps_end - self.eps_start)


def comm_matrix(n: int, mode: str = "exclude-self", leader_included: bool = True) -> np.ndarray:
    """Row ``m`` holds the averaging weights producing agent ``m``'s communication vector.

    With ``exclude-leader`` every agent averages all inputs except the leader
    (the last input, when present).
    """
    if mode == "exclude-self":
        return (1.0 - np.eye(n)) / (n - 1) if n > 1 else np.zeros((n, n))
    if mode == "exclude-leader":
        if leader_included:
            if n == 1:
                return np.zeros((1, 1))
            p = np.zeros((n, n))
            p[:, : n - 1] = 1.0 / (n - 1)
            return p
        return np.full((n, n), 1.0 / n)
    raise ValueError(f"unknown comm mean mode {mode!r}")


class CommNet:
    """Encoder, ``L`` communication layers over ``[h_m, c_m]`` and a softmax head.

    ``forward`` takes observations shaped ``(batch, n_agents, obs_dim)``; the
    head reads the concatenation of all final hidden vectors.
    """

    def __init__(self, encoder: Mlp, comm: Sequence[Mlp], head: Mlp, n_agents: int,
                 comm_mean: str = "exclude-self", leader_included: bool = True):
        self.encoder = encoder
        self.comm = list(comm)
        self.head = head
        self.n_agents = n_agents
        self.comm_mean = comm_mean
        self.leader_included = leader_included
        self.hidden = encoder.n_out
        for layer in self.comm:
            if layer.n_in != 2 * self.hidden or layer.n_out != self.hidden:
                raise ValueError("communication layers must map 2*hidden -> hidden")
        if head.n_in != n_agents * self.hidden:
            raise ValueError("head input must be the concatenation of all hidden vectors")
        self.mix = comm_matrix(n_agents, comm_mean, leader_included)

    @classmethod
    def build(cls, obs_dim: int, n_agents: int, rng, hidden: int = 64, comm_layers: int = 4,
              n_actions: int = N_ACTIONS, comm_mean: str = "exclude-self", leader_included: bool = True):
        encoder = Mlp.build([obs_dim, hidden], ["relu"], rng)
        comm = [Mlp.build([2 * hidden, hidden], ["relu"], rng) for _ in range(comm_layers)]
        head = Mlp.build([n_agents * hidden, n_actions], ["softmax"], rng)
        return cls(encoder, comm, head, n_agents, comm_mean, leader_included)

    @property
    def n_in(self) -> int:
        return self.encoder.n_in

    def stages(self) -> list[Mlp]:
        return [self.encoder, *self.comm, self.head]

    def params(self) -> list[np.ndarray]:
        return [p for stage in self.stages() for p in stage.params()]

    def set_params(self, values):
        values = list(values)
        for stage in self.stages():
            k = len(stage.params())
            stage.set_params(values[:k])
            values = values[k:]

    def copy(self) -> "CommNet":
        return CommNet(self.encoder.copy(), [c.copy() for c in self.comm], self.head.copy(),
                       self.n_agents, self.comm_mean, self.leader_included)

    def forward(self, obs):
        obs = np.asarray(obs, dtype=float)
        squeeze = obs.ndim == 2
        x = obs[None] if squeeze else obs
        b, n, d = x.shape
        if n != self.n_agents:
            raise ValueError(f"expected {self.n_agents} observations, got {n}")
        h, enc_cache = self.encoder.forward(x.reshape(b * n, d))
        h = h.reshape(b, n, self.hidden)
        hiddens = [h]
        caches = []
        for layer in self.comm:
            c = self.mix @ h
            out, cache = layer.forward(np.concatenate([h, c], axis=-1).reshape(b * n, 2 * self.hidden))
            caches.append(cache)
            h = out.reshape(b, n, self.hidden)
            hiddens.append(h)
        probs, head_cache = self.head.forward(h.reshape(b, n * self.hidden))
        cache = (squeeze, b, n, d, enc_cache, caches, head_cache, hiddens)
        return (probs[0] if squeeze else probs), cache

    def __call__(self, obs):
        return self.forward(obs)[0]

    def backward(self, cache, grad_out):
        """Parameter gradients (ordered like :meth:`params`) and input gradient."""
        squeeze, b, n, d, enc_cache, caches, head_cache, _ = cache
        g = np.asarray(grad_out, dtype=float)
        if squeeze:
            g = g[None]
        head_grads, gh = self.head.backward(head_cache, g)
        gh = gh.reshape(b, n, self.hidden)
        comm_grads = [None] * len(self.comm)
        for i in range(len(self.comm) - 1, -1, -1):
            grads, gx = self.comm[i].backward(caches[i], gh.reshape(b * n, self.hidden))
            comm_grads[i] = grads
            gx = gx.reshape(b, n, 2 * self.hidden)
            gh = gx[..., : self.hidden] + self.mix.T @ gx[..., self.hidden:]
        enc_grads, gin = self.encoder.backward(enc_cache, gh.reshape(b * n, self.hidden))
        grads = enc_grads + [p for cg in comm_grads for p in cg] + head_grads
        gin = gin.reshape(b, n, d)
        return grads, (gin[0] if squeeze else gin)


def commnet_forward(net: CommNet, observations) -> np.ndarray:
    return net(observations)


def commnet_flops(net: CommNet) -> int:
    """Per-agent encoder and communication layers, the averaging, and the head."""
    n = net.n_agents
    total = n * flops_count(net.encoder)
    for layer in net.comm:
        total += n * flops_count(layer)
        # dense mixing of n hidden vectors
        total += 2 * n * n * net.hidden
    return total + flops_count(net.head)


def method_flops(method, dnn_flops: int, commnet_flops_: int, m_agents: int) -> int:
    method = Method(method)
    if method == Method.PROPOSED:
        return commnet_flops_ + (m_agents - 1) * dnn_flops
    if method == Method.COMP1:
        return m_agents * dnn_flops
    if method == Method.COMP2:
        return m_agents * commnet_flops_
    return 0


def select_action(dist, epsilon: float, rng: np.random.Generator) -> int:
    """Epsilon-greedy: uniform with probability ``epsilon``, else argmax (lowest index on ties)."""
    dist = np.asarray(dist)
    if epsilon > 0.0 and rng.random() < epsilon:
        return int(rng.integers(len(dist)))
    return int(np.argmax(dist))


class Team:
    """Joint policy of all agents for one method.

    ``nets`` holds the distinct actor networks; ``owner[m]`` indexes the network
    acting for agent ``m``.  CommNet actors read every agent's observation with
    their own placed last.
    """

    def __init__(self, method, nets: list, owner: list[int], m_agents: int, leader_sees_self: bool = True):
        self.method = Method(method)
        self.nets = nets
        self.owner = owner
        self.m_agents = m_agents
        self.leader_sees_self = leader_sees_self

    @classmethod
    def build(cls, method, obs_dim: int, m_agents: int, cfg: TrainConfig, rng) -> "Team":
        method = Method(method)
        leader = m_agents - 1
        n_comm = m_agents if cfg.leader_sees_self else m_agents - 1

        def dnn():
            return Mlp.policy(obs_dim, N_ACTIONS, rng, cfg.hidden, cfg.depth)

        def comm():
            return CommNet.build(obs_dim, n_comm, rng, cfg.hidden, cfg.comm_layers,
                                 comm_mean=cfg.comm_mean, leader_included=cfg.leader_sees_self)

        if method == Method.RANDOM:
            return cls(method, [], [], m_agents, cfg.leader_sees_self)
        if method == Method.PROPOSED:
            if cfg.share_follower_weights:
                nets = [dnn(), comm()]
                owner = [0] * (m_agents - 1) + [1]
            else:
                nets = [dnn() for _ in range(m_agents - 1)] + [comm()]
                owner = list(range(m_agents))
            assert owner[leader] == len(nets) - 1
            return cls(method, nets, owner, m_agents, cfg.leader_sees_self)
        make = dnn if method == Method.COMP1 else comm
        if cfg.share_follower_weights:
            return cls(method, [make()], [0] * m_agents, m_agents, cfg.leader_sees_self)
        return cls(method, [make() for _ in range(m_agents)], list(range(m_agents)), m_agents,
                   cfg.leader_sees_self)

    def copy(self) -> "Team":
        return Team(self.method, [n.copy() for n in self.nets], list(self.owner), self.m_agents,
                    self.leader_sees_self)

    def net_for(self, m: int):
        return self.nets[self.owner[m]]

    def actor_input(self, obs, m: int):
        """Slice of the joint observation ``(batch, M, D)`` that agent ``m``'s actor reads."""
        net = self.net_for(m)
        if isinstance(net, CommNet):
            others = [j for j in range(self.m_agents) if j != m]
            order = others + [m] if self.leader_sees_self else others
            return obs[:, order]
        return obs[:, m]

    def forward(self, obs, m: int):
        return self.net_for(m).forward(self.actor_input(obs, m))

    def distributions(self, obs) -> np.ndarray:
        """Action distributions ``(M, 7)`` for one joint observation ``(M, D)``."""
        obs = np.asarray(obs)[None]
        return np.stack([self.net_for(m)(self.actor_input(obs, m))[0] for m in range(self.m_agents)])

    def act(self, obs, epsilon: float, rng) -> np.ndarray:
        if self.method == Method.RANDOM:
            return rng.integers(N_ACTIONS, size=self.m_agents)
        dists = self.distributions(obs)
        return np.array([select_action(d, epsilon, rng) for d in dists])

    def greedy(self, obs_batch) -> np.ndarray:
        """Argmax joint actions ``(batch, M)`` for a batch of joint observations."""
        return np.stack(
            [np.argmax(self.net_for(m)(self.actor_input(obs_batch, m)), axis=1) for m in range(self.m_agents)],
            axis=1,
        )

    def params(self) -> list[np.ndarray]:
        return [p for net in self.nets for p in net.params()]


def one_hot(idx, n: int) -> np.ndarray:
    idx = np.asarray(idx)
    out = np.zeros(idx.shape + (n,))
    np.put_along_axis(out, idx[..., None], 1.0, axis=-1)
    return out


def critic_input(obs, actions, m: int, independent: bool = False) -> np.ndarray:
    """Critic features for agent ``m``.

    Joint observations, every agent's one-hot action with agent ``m``'s own
    block zeroed, and an agent-id one-hot.  The critic scores all of ``m``'s
    actions at once, so its own action selects an output instead of being an
    input.  ``independent`` keeps only ``m``'s observation and id.
    """
    obs = np.asarray(obs, dtype=float)
    actions = np.asarray(actions)
    b, n_agents, _ = obs.shape
    tag = np.zeros((b, n_agents))
    tag[:, m] = 1.0
    if independent:
        return np.concatenate([obs[:, m], tag], axis=1)
    act = one_hot(actions, N_ACTIONS)
    act[:, m] = 0.0
    return np.concatenate([obs.reshape(b, -1), act.reshape(b, -1), tag], axis=1)


def critic_dim(obs_dim: int, m_agents: int, independent: bool = False) -> int:
    if independent:
        return obs_dim + m_agents
    return m_agents * (obs_dim + N_ACTIONS) + m_agents


def critic_values(critic: Mlp, obs, actions, m: int, independent: bool = False) -> np.ndarray:
    """Action values ``(batch, 7)`` of every action of agent ``m`` given the others' actions."""
    x = critic_input(obs, actions, m, independent)
    if x.shape[1] != critic.n_in:
        raise ValueError(f"critic expects {critic.n_in} features, got {x.shape[1]}")
    return critic(x)


def critic_q(critic: Mlp, obs, actions, m: int, independent: bool = False) -> np.ndarray:
    """Q of the joint action for agent ``m``: one scalar per batch row."""
    q = critic_values(critic, obs, actions, m, independent)
    return q[np.arange(len(q)), np.asarray(actions)[:, m]]


def compute_target(r, done, gamma: float, q_next):
    """One-step bootstrapped target; terminal transitions keep only the reward."""
    return np.asarray(r, dtype=float) + gamma * (1.0 - np.asarray(done, dtype=float)) * np.asarray(q_next)


class ReplayBuffer:
    def __init__(self, capacity: int, m_agents: int, obs_dim: int):
        self.capacity = capacity
        self.obs = np.zeros((capacity, m_agents, obs_dim))
        self.next_obs = np.zeros((capacity, m_agents, obs_dim))
        self.actions = np.zeros((capacity, m_agents), dtype=np.int64)
        self.rewards = np.zeros((capacity, m_agents))
        self.done = np.zeros(capacity)
        self.inserted = 0

    def __len__(self):
        return min(self.inserted, self.capacity)

    def add(self, obs, actions, rewards, next_obs, done) -> None:
        i = self.inserted % self.capacity
        self.obs[i] = obs
        self.actions[i] = actions
        self.rewards[i] = rewards
        self.next_obs[i] = next_obs
        self.done[i] = float(done)
        self.inserted += 1

    def indices(self, batch_size: int, rng) -> np.ndarray:
        if len(self) == 0:
            raise ValueError("cannot sample from an empty buffer")
        return rng.integers(len(self), size=batch_size)

    def sample(self, batch_size: int, rng):
        idx = self.indices(batch_size, rng)
        return self.obs[idx], self.actions[idx], self.rewards[idx], self.next_obs[idx], self.done[idx]

    def state(self) -> dict:
        n = len(self)
        return {"obs": self.obs[:n], "next_obs": self.next_obs[:n], "actions": self.actions[:n],
                "rewards": self.rewards[:n], "done": self.done[:n], "inserted": self.inserted}

    def load_state(self, state: dict) -> None:
        n = len(state["done"])
        self.obs[:n] = state["obs"]
        self.next_obs[:n] = state["next_obs"]
        self.actions[:n] = state["actions"]
        self.rewards[:n] = state["rewards"]
        self.done[:n] = state["done"]
        self.inserted = int(state["inserted"])


class CtdeLearner:
    """Centralized critic(s), target copies and Adam states for a :class:`Team`."""

    def __init__(self, team: Team, obs_dim: int, cfg: TrainConfig, rng):
        self.team = team
        self.cfg = cfg
        self.independent = team.method == Method.COMP1
        m = team.m_agents
        n_in = critic_dim(obs_dim, m, self.independent)
        if cfg.critic_sharing == "shared":
            self.critics = [Mlp.policy(n_in, N_ACTIONS, rng, cfg.hidden, cfg.depth, head="identity")]
            self.critic_owner = [0] * m
        else:
            self.critics = [Mlp.policy(n_in, N_ACTIONS, rng, cfg.hidden, cfg.depth, head="identity")
                            for _ in range(m)]
            self.critic_owner = list(range(m))
        self.critic_opts = [Adam(c.params(), lr=cfg.lr) for c in self.critics]
        self.actor_opts = [Adam(n.params(), lr=cfg.lr) for n in team.nets]
        self.target_team = team.copy()
        self.target_critics = [c.copy() for c in self.critics]
        self.updates = 0

    def critic_for(self, m: int, target: bool = False) -> Mlp:
        pool = self.target_critics if target else self.critics
        return pool[self.critic_owner[m]]

    def sync_targets(self) -> None:
        for tgt, src in zip(self.target_team.nets, self.team.nets):
            tgt.set_params([p.copy() for p in src.params()])
        for tgt, src in zip(self.target_critics, self.critics):
            tgt.set_params([p.copy() for p in src.params()])

    def _stacked(self, obs, actions, agents):
        return np.concatenate([critic_input(obs, actions, m, self.independent) for m in agents])

    def _critic_pass(self, obs, actions, target: bool = False):
        """Forward every agent through its critic; yields ``(agents, net, values, cache)`` per network."""
        pool = self.target_critics if target else self.critics
        for k, net in enumerate(pool):
            agents = [m for m in range(self.team.m_agents) if self.critic_owner[m] == k]
            values, cache = net.forward(self._stacked(obs, actions, agents))
            yield agents, net, values, cache

    def targets(self, rewards, next_obs, done) -> np.ndarray:
        """Bootstrapped targets ``(batch, M)`` from the target actors and critic."""
        b = len(rewards)
        next_actions = self.target_team.greedy(next_obs)
        y = np.empty_like(rewards)
        for agents, _, values, _ in self._critic_pass(next_obs, next_actions, target=True):
            for i, m in enumerate(agents):
                q_next = values[i * b:(i + 1) * b][np.arange(b), next_actions[:, m]]
                y[:, m] = compute_target(rewards[:, m], done, self.cfg.gamma, q_next)
        return y

    def critic_gradients(self, obs, actions, y):
        """Mean squared TD error over batch and agents, and its gradient per critic network."""
        b, m_agents = actions.shape
        loss = 0.0
        all_grads = []
        for agents, net, values, cache in list(self._critic_pass(obs, actions)):
            grad = np.zeros_like(values)
            for i, m in enumerate(agents):
                rows = np.arange(i * b, (i + 1) * b)
                err = y[:, m] - values[rows, actions[:, m]]
                loss += float(np.sum(err**2))
                grad[rows, actions[:, m]] = -2.0 * err / (b * m_agents)
            all_grads.append(net.backward(cache, grad)[0])
        return loss / (b * m_agents), all_grads

    def critic_update(self, obs, actions, y) -> float:
        loss, grads = self.critic_gradients(obs, actions, y)
        for net, opt, g in zip(self.critics, self.critic_opts, grads):
            opt.step(net.params(), g)
        return loss

    def actor_objective_gradients(self, obs, actions):
        """Objective averaged over agents and its gradient per actor network (ascent direction).

        For agent ``m`` the objective is ``mean_b sum_a pi_m(a|o) Q_m(s, a, a_-m)``
        with the other agents' actions taken from the batch, plus
        ``entropy_coef`` times the mean policy entropy.
        """
        b, m_agents = actions.shape
        coef = self.cfg.entropy_coef
        q_all = np.empty((m_agents, b, N_ACTIONS))
        for agents, _, values, _ in self._critic_pass(obs, actions):
            for i, m in enumerate(agents):
                q_all[m] = values[i * b:(i + 1) * b]
        grads = [None] * len(self.team.nets)
        objective = 0.0
        for m in range(m_agents):
            net_idx = self.team.owner[m]
            probs, cache = self.team.forward(obs, m)
            objective += float(np.mean(np.sum(probs * q_all[m], axis=1)))
            dj = q_all[m] / (b * m_agents)
            if coef:
                logp = np.log(np.maximum(probs, 1e-300))
                objective -= coef * float(np.mean(np.sum(probs * logp, axis=1)))
                dj = dj - coef * (logp + 1.0) / (b * m_agents)
            g, _ = self.team.net_for(m).backward(cache, dj)
            grads[net_idx] = g if grads[net_idx] is None else [a + c for a, c in zip(grads[net_idx], g)]
        return objective / m_agents, grads

    def actor_update(self, obs, actions) -> float:
        objective, grads = self.actor_objective_gradients(obs, actions)
        for net, opt, g in zip(self.team.nets, self.actor_opts, grads):
            if g is not None:
                opt.step(net.params(), [-a for a in g])
        return objective

    def train_step(self, buffer: ReplayBuffer, rng) -> float:
        """One critic and one actor update from a uniform mini-batch; returns the critic loss."""
        if len(buffer) < self.cfg.warmup:
            raise RuntimeError(f"replay buffer holds {len(buffer)} < warmup {self.cfg.warmup} transitions")
        obs, actions, rewards, next_obs, done = buffer.sample(self.cfg.batch_size, rng)
        return self.update_on(obs, actions, rewards * self.cfg.reward_scale, next_obs, done)

    def update_on(self, obs, actions, rewards, next_obs, done) -> float:
        y = self.targets(rewards, next_obs, done)
        loss = self.critic_update(obs, actions, y)
        self.actor_update(obs, actions)
        self.updates += 1
        return loss


@dataclass
class EpisodeResult:
    total_reward: float
    agent_rewards: np.ndarray
    steps: list = field(default_factory=list)
    losses: list = field(default_factory=list)


def run_episode(world: UavWorld, team: Team, seed: int, epsilon: float, act_rng,
                learner: CtdeLearner | None = None, buffer: ReplayBuffer | None = None,
                train_rng=None, keep_steps: bool = False) -> EpisodeResult:
    """Roll out one episode; with a learner and buffer, store transitions and train."""
    obs = world.reset(seed)
    agent_rewards = np.zeros(team.m_agents)
    result = EpisodeResult(0.0, agent_rewards)
    if keep_steps:
        result.steps.append(world.score())
    while not world.done:
        actions = team.act(obs, epsilon, act_rng)
        out = world.step(actions)
        agent_rewards += out.rewards
        if keep_steps:
            result.steps.append(out.metrics | {"actions": [int(a) for a in actions]})
        if buffer is not None:
            buffer.add(obs, actions, out.rewards, out.observations, out.done)
            if (learner is not None and len(buffer) >= learner.cfg.warmup
                    and world.state.step % learner.cfg.update_period == 0):
                result.losses.append(learner.train_step(buffer, train_rng))
        obs = out.observations
    result.total_reward = float(agent_rewards.sum())
    return result


def make_rngs(seed: int) -> dict:
    return {label: derive_rng(seed, label) for label in ("policy-init", "exploration", "replay", "eval")}
