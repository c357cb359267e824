import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from irsuav.estimator import DdpgSumRateOptimizer

TINY = dict(n_elements=3, n_users=2, episodes=2, steps_per_episode=8,
            capacity=64, warmup=6, batch_size=4, hidden_dim=16,
            eval_episodes=2, random_state=11)


def test_get_params_round_trips_through_set_params():
    est = DdpgSumRateOptimizer(**TINY)
    params = est.get_params()
    assert params["n_elements"] == 3
    assert params["random_state"] == 11
    est.set_params(n_elements=5)
    assert est.get_params()["n_elements"] == 5


def test_sklearn_clone_preserves_parameters():
    est = DdpgSumRateOptimizer(**TINY)
    twin = clone(est)
    assert twin.get_params() == est.get_params()
    assert not hasattr(twin, "agent_")


def test_predict_before_fit_raises():
    est = DdpgSumRateOptimizer(**TINY)
    with pytest.raises(NotFittedError):
        est.predict(np.zeros((1, 12)))


def test_fit_sets_learned_attributes():
    est = DdpgSumRateOptimizer(**TINY).fit()
    assert hasattr(est, "agent_")
    assert hasattr(est, "env_")
    assert len(est.history_) == 2
    assert est.n_features_in_ == 2 * (3 + 2 + 1)


def test_predict_shape_and_bounds():
    est = DdpgSumRateOptimizer(**TINY).fit()
    X = np.random.default_rng(0).normal(size=(5, est.n_features_in_))
    actions = est.predict(X)
    assert actions.shape == (5, est.env_.action_dim)
    assert np.all((actions >= -1.0) & (actions <= 1.0))


def test_predict_rejects_wrong_width():
    est = DdpgSumRateOptimizer(**TINY).fit()
    with pytest.raises(ValueError, match="features"):
        est.predict(np.zeros((2, est.n_features_in_ + 1)))


def test_fit_is_deterministic_in_random_state():
    a = DdpgSumRateOptimizer(**TINY).fit()
    b = DdpgSumRateOptimizer(**TINY).fit()
    X = np.random.default_rng(1).normal(size=(3, a.n_features_in_))
    np.testing.assert_array_equal(a.predict(X), b.predict(X))
    assert a.score() == b.score()


def test_scores_are_positive_rates():
    est = DdpgSumRateOptimizer(**TINY).fit()
    assert est.score() > 0.0
    assert est.baseline_score() > 0.0


def test_invalid_parameters_surface_at_fit_time():
    est = DdpgSumRateOptimizer(**{**TINY, "warmup": 2})
    with pytest.raises(Exception, match="warmup"):
        est.fit()
