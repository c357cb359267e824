"""Deterministic policy-gradient agent for the downlink control problem.

Actor and critic are small dense networks from :mod:`.neuralnet`; each has a
slowly tracking target copy. Transitions live in a fixed-capacity ring buffer
and are replayed uniformly. Every random draw comes from a named seed stream,
so a full training run is reproducible bit for bit.
"""

from dataclasses import dataclass

import numpy as np

from .environment import IrsUavNomaEnv
from .errors import NotReadyError, NumericsError
from .neuralnet import (
    Adam,
    CriticNet,
    build_actor,
    load_archive,
    save_archive,
    soft_update,
)
from .seeding import (
    BUFFER,
    EVAL_EPISODE,
    EXPLORE,
    NET_INIT,
    POLICY_ACTION,
    TRAIN_EPISODE,
    stream,
)


@dataclass(frozen=True, eq=False)
class Batch:
    """A minibatch of transitions as parallel arrays."""

    states: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    next_states: np.ndarray
    terminals: np.ndarray

    def __len__(self):
        return self.states.shape[0]


class ReplayBuffer:
    """Ring buffer of transitions with uniform (with-replacement) sampling.

    Once full, each push overwrites the oldest stored transition.
    """

    def __init__(self, capacity, state_dim, action_dim):
        if capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {capacity}")
        self.capacity = int(capacity)
        self._states = np.zeros((capacity, state_dim))
        self._actions = np.zeros((capacity, action_dim))
        self._rewards = np.zeros(capacity)
        self._next_states = np.zeros((capacity, state_dim))
        self._terminals = np.zeros(capacity, dtype=bool)
        self._cursor = 0
        self._fill = 0

    def __len__(self):
        return self._fill

    def push(self, state, action, reward, next_state, terminal):
        i = self._cursor
        self._states[i] = state
        self._actions[i] = action
        self._rewards[i] = reward
        self._next_states[i] = next_state
        self._terminals[i] = terminal
        self._cursor = (i + 1) % self.capacity
        self._fill = min(self._fill + 1, self.capacity)

    def sample(self, n, rng):
        if self._fill < n:
            raise NotReadyError(f"buffer holds {self._fill} transitions, need {n}")
        idx = rng.integers(0, self._fill, size=n)
        return Batch(
            states=self._states[idx].copy(),
            actions=self._actions[idx].copy(),
            rewards=self._rewards[idx].copy(),
            next_states=self._next_states[idx].copy(),
            terminals=self._terminals[idx].copy(),
        )


def select_action(actor, state, noise_std, rng):
    """Greedy actor output plus component-wise Gaussian noise, clamped to
    the raw action box [-1, 1]. noise_std = 0 gives the deterministic policy.
    """
    out, _ = actor.forward(np.asarray(state)[None, :], train=False)
    action = out[0]
    if noise_std > 0.0:
        action = action + rng.normal(0.0, noise_std, size=action.shape)
    return np.clip(action, -1.0, 1.0)


class DdpgAgent:
    """Evaluation and target actor/critic pairs plus their optimizers."""

    def __init__(self, state_dim, action_dim, hidden_dim, learning_rate,
                 discount, tau, rng):
        self.state_dim = int(state_dim)
        self.action_dim = int(action_dim)
        self.hidden_dim = int(hidden_dim)
        self.learning_rate = float(learning_rate)
        self.discount = float(discount)
        self.tau = float(tau)
        # Fixed construction order keeps initialization reproducible.
        self.actor = build_actor(state_dim, action_dim, hidden_dim, rng)
        self.critic = CriticNet(state_dim, action_dim, hidden_dim, rng)
        self.actor_target = self.actor.clone()
        self.critic_target = self.critic.clone()
        self.actor_opt = Adam(learning_rate)
        self.critic_opt = Adam(learning_rate)

    def select_action(self, state, noise_std, rng=None):
        return select_action(self.actor, state, noise_std, rng)

    def compute_targets(self, batch):
        """Bootstrapped regression targets: the reward alone on terminal
        transitions, otherwise reward + discount * Q'(s', mu'(s')), with both
        target networks in eval mode."""
        next_actions, _ = self.actor_target.forward(batch.next_states, train=False)
        next_q, _ = self.critic_target.forward(batch.next_states, next_actions,
                                               train=False)
        targets = batch.rewards.copy()
        live = ~batch.terminals
        targets[live] += self.discount * next_q[live]
        return targets

    def critic_update(self, batch, targets):
        """One descent step on the mean squared regression error. Returns the
        pre-step loss; a non-finite loss aborts before any mutation."""
        n = len(batch)
        q, cache = self.critic.forward(batch.states, batch.actions, train=True)
        residual = q - targets
        loss = float(np.mean(residual ** 2))
        if not np.isfinite(loss):
            raise NumericsError(f"critic loss is not finite ({loss})")
        dq = 2.0 * residual / n
        _, _, grads = self.critic.backward(cache, dq)
        self.critic_opt.step(self.critic.params(), grads)
        return loss

    def actor_update(self, states):
        """One ascent step on the mean critic value of the actor's own
        actions. Gradients reach the actor through the critic's action input;
        the critic's parameters and running stats are left untouched."""
        n = states.shape[0]
        actions, actor_cache = self.actor.forward(states, train=True)
        q, critic_cache = self.critic.forward(states, actions, train=True,
                                              update_stats=False)
        objective = float(np.mean(q))
        if not np.isfinite(objective):
            raise NumericsError(f"actor objective is not finite ({objective})")
        dq = np.full(n, 1.0 / n)
        _, dactions, _ = self.critic.backward(critic_cache, dq)
        _, grads = self.actor.backward(actor_cache, dactions)
        self.actor_opt.step(self.actor.params(), grads, maximize=True)
        return objective

    def soft_update_targets(self):
        soft_update(self.actor_target, self.actor, self.tau)
        soft_update(self.critic_target, self.critic, self.tau)

    def save(self, path, extra=None):
        meta = dict(extra or {})
        meta["agent"] = {
            "state_dim": self.state_dim,
            "action_dim": self.action_dim,
            "hidden_dim": self.hidden_dim,
            "learning_rate": self.learning_rate,
            "discount": self.discount,
            "tau": self.tau,
        }
        save_archive(path, {
            "actor": self.actor,
            "critic": self.critic,
            "actor_target": self.actor_target,
            "critic_target": self.critic_target,
        }, extra=meta)

    @classmethod
    def load(cls, path):
        """Rebuild an agent from :meth:`save` output. Optimizer moments are
        not persisted; a loaded agent is for evaluation or fresh fine-tuning.
        Returns (agent, extra)."""
        networks, extra = load_archive(path)
        meta = extra.pop("agent")
        agent = cls(meta["state_dim"], meta["action_dim"], meta["hidden_dim"],
                    meta["learning_rate"], meta["discount"], meta["tau"],
                    rng=None)
        agent.actor = networks["actor"]
        agent.critic = networks["critic"]
        agent.actor_target = networks["actor_target"]
        agent.critic_target = networks["critic_target"]
        return agent, extra


class GreedyActorPolicy:
    """Deterministic evaluation policy: the actor's output, no noise."""

    def __init__(self, actor):
        self.actor = actor

    def act(self, state, rng):
        return select_action(self.actor, state, 0.0, rng)


class RandomPolicy:
    """Uniform raw actions over the action box."""

    def __init__(self, action_dim):
        self.action_dim = int(action_dim)

    def act(self, state, rng):
        return rng.uniform(-1.0, 1.0, size=self.action_dim)


class EqualPowerCenteredPolicy:
    """Even power split, uniformly random reflector angles, UAV parked at the
    area center."""

    def __init__(self, n_elements, n_users):
        self.n_elements = int(n_elements)
        self.n_users = int(n_users)

    def act(self, state, rng):
        phi = rng.uniform(0.0, 2.0 * np.pi, size=self.n_elements)
        raw = np.zeros(2 * self.n_elements + self.n_users + 2)
        raw[0 : 2 * self.n_elements : 2] = np.cos(phi)
        raw[1 : 2 * self.n_elements : 2] = np.sin(phi)
        return raw


@dataclass(frozen=True, eq=False)
class EpisodeStats:
    """Evaluation bookkeeping for one rollout."""

    accumulated_reward: float
    mean_sum_rate: float
    qos_violation_rate: float


def rollout(env, policy, episode_rng, action_rng, on_step=None):
    """Run one episode; returns its EpisodeStats."""
    state = env.reset(episode_rng)
    total_reward = 0.0
    sum_rates = 0.0
    violations = 0
    for t in range(env.episode_steps):
        action = policy.act(state, action_rng)
        state, reward, report = env.step(action)
        total_reward += reward
        sum_rates += report.sum_rate
        violations += 0 if report.qos_ok else 1
        if on_step is not None:
            on_step(t, reward, report)
    n = env.episode_steps
    return EpisodeStats(total_reward, sum_rates / n, violations / n)


def run_policy(env, policy, n_episodes, master_seed):
    """Evaluate a policy over seeded episodes.

    Episode seeds depend only on (master_seed, episode index), so two
    policies evaluated with the same master seed face identical user
    placements and channel draws.
    """
    stats = []
    for ep in range(n_episodes):
        episode_rng = stream(master_seed, EVAL_EPISODE, ep)
        action_rng = stream(master_seed, POLICY_ACTION, ep)
        stats.append(rollout(env, policy, episode_rng, action_rng))
    return stats


@dataclass(frozen=True, eq=False)
class TrainResult:
    agent: "DdpgAgent"
    env: IrsUavNomaEnv
    episodes: list  # per-episode metric dicts, schema of metrics.csv


def train(config, progress=None):
    """Full training run driven by an experiment config.

    Until the replay buffer holds ``warmup`` transitions the loop only
    collects data with uniform random actions; after that every step selects
    a noisy actor action, then performs one critic step, one actor step, and
    one soft update of both target networks.
    """
    env = config.build_env()
    agent = DdpgAgent(env.state_dim, env.action_dim, config.hidden_dim,
                      config.learning_rate, config.discount, config.tau,
                      rng=stream(config.master_seed, NET_INIT))
    buffer = ReplayBuffer(config.capacity, env.state_dim, env.action_dim)
    explore_rng = stream(config.master_seed, EXPLORE)
    buffer_rng = stream(config.master_seed, BUFFER)
    noise_std = float(np.sqrt(config.noise_variance))
    warmup = config.warmup
    episodes = []
    for ep in range(config.episodes):
        state = env.reset(stream(config.master_seed, TRAIN_EPISODE, ep))
        total_reward = 0.0
        losses = []
        objectives = []
        violations = 0
        for t in range(config.steps_per_episode):
            if len(buffer) >= warmup:
                action = agent.select_action(state, noise_std, explore_rng)
            else:
                action = explore_rng.uniform(-1.0, 1.0, size=env.action_dim)
            next_state, reward, report = env.step(action)
            terminal = t == config.steps_per_episode - 1
            buffer.push(state, action, reward, next_state, terminal)
            if len(buffer) >= warmup:
                batch = buffer.sample(config.batch_size, buffer_rng)
                targets = agent.compute_targets(batch)
                losses.append(agent.critic_update(batch, targets))
                objectives.append(agent.actor_update(batch.states))
                agent.soft_update_targets()
            total_reward += reward
            violations += 0 if report.qos_ok else 1
            state = next_state
        record = {
            "episode": ep,
            "accumulated_reward": total_reward,
            "mean_critic_loss": float(np.mean(losses)) if losses else float("nan"),
            "mean_actor_objective": float(np.mean(objectives)) if objectives else float("nan"),
            "qos_violation_rate": violations / config.steps_per_episode,
        }
        episodes.append(record)
        if progress is not None:
            progress(record, agent)
    return TrainResult(agent=agent, env=env, episodes=episodes)
