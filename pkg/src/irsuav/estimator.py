"""Estimator-style facade over the trainer, following the scikit-learn
fit/predict/get_params conventions so the optimizer drops into existing
model-selection tooling. The underlying problem is a simulation, so ``fit``
takes no data: it runs training under the configured seed, and ``predict``
maps observation vectors to greedy raw actions.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .config import ExperimentConfig
from .ddpg import GreedyActorPolicy, RandomPolicy, run_policy, train


class DdpgSumRateOptimizer(BaseEstimator):
    """Joint phase/power/position optimizer trained by deterministic policy
    gradients.

    Parameters default to the desk-scale profile so a fit completes in
    seconds to minutes. ``random_state`` is the master seed; every random
    draw in the run derives from it.
    """

    def __init__(self, n_elements=8, n_users=2, power_db=10.0, noise_db=-120.0,
                 r_min=0.05, rician_factor=10.0, area_bounds=(20.0, 20.0, 80.0, 80.0),
                 episodes=200, steps_per_episode=100, capacity=5000, warmup=1000,
                 batch_size=16, learning_rate=0.001, discount=0.95, tau=0.005,
                 noise_variance=0.1, hidden_dim=300, eval_episodes=50,
                 random_state=0):
        self.n_elements = n_elements
        self.n_users = n_users
        self.power_db = power_db
        self.noise_db = noise_db
        self.r_min = r_min
        self.rician_factor = rician_factor
        self.area_bounds = area_bounds
        self.episodes = episodes
        self.steps_per_episode = steps_per_episode
        self.capacity = capacity
        self.warmup = warmup
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.discount = discount
        self.tau = tau
        self.noise_variance = noise_variance
        self.hidden_dim = hidden_dim
        self.eval_episodes = eval_episodes
        self.random_state = random_state

    def _config(self):
        x_min, y_min, x_max, y_max = self.area_bounds
        return ExperimentConfig(
            n_elements=self.n_elements,
            n_users=self.n_users,
            power_db=self.power_db,
            noise_db=self.noise_db,
            r_min=self.r_min,
            rician_factor=self.rician_factor,
            area_x_min=x_min,
            area_y_min=y_min,
            area_x_max=x_max,
            area_y_max=y_max,
            episodes=self.episodes,
            steps_per_episode=self.steps_per_episode,
            capacity=self.capacity,
            warmup=self.warmup,
            batch_size=self.batch_size,
            learning_rate=self.learning_rate,
            discount=self.discount,
            tau=self.tau,
            noise_variance=self.noise_variance,
            hidden_dim=self.hidden_dim,
            eval_episodes=self.eval_episodes,
            master_seed=self.random_state,
        ).validate()

    def fit(self, X=None, y=None):
        """Run the training loop. X and y are accepted for API compatibility
        and ignored; the environment generates its own experience."""
        config = self._config()
        result = train(config)
        self.agent_ = result.agent
        self.env_ = result.env
        self.history_ = result.episodes
        self.n_features_in_ = result.env.state_dim
        return self

    def predict(self, X):
        """Greedy raw actions for a batch of observation vectors."""
        check_is_fitted(self, "agent_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        actions, _ = self.agent_.actor.forward(X, train=False)
        return np.clip(actions, -1.0, 1.0)

    def score(self, X=None, y=None):
        """Mean per-episode sum rate of the greedy policy on fresh seeded
        evaluation episodes (bits/s/Hz); higher is better."""
        check_is_fitted(self, "agent_")
        stats = run_policy(self.env_, GreedyActorPolicy(self.agent_.actor),
                           self.eval_episodes, self.random_state)
        return float(np.mean([s.mean_sum_rate for s in stats]))

    def baseline_score(self):
        """Random-policy counterpart of :meth:`score` on the same episodes."""
        check_is_fitted(self, "agent_")
        stats = run_policy(self.env_, RandomPolicy(self.env_.action_dim),
                           self.eval_episodes, self.random_state)
        return float(np.mean([s.mean_sum_rate for s in stats]))
