"""Episode environment for the IRS-assisted UAV NOMA downlink.

Each episode draws fresh user positions and channel fading, holds them fixed,
and lets the agent steer the reflector phases, the power split, and the UAV
position once per step. The observation concatenates the previous step's
per-position rates, the reflector phases as (cos, sin) pairs, the power
coefficients, and the UAV coordinates.
"""

import dataclasses
from dataclasses import dataclass

import numpy as np

from .channel import (
    TWO_PI,
    NetworkGeometry,
    Rectangle,
    effective_gains,
    sample_rician,
    wrap_angle,
)
from .errors import NotReadyError
from .noma import SystemPower, rate_report
from .validation import check_positive, check_positive_int, check_vector


@dataclass(frozen=True, eq=False)
class ControlAction:
    """Decoded, feasible control: reflector angles, power split, UAV spot."""

    theta: np.ndarray
    rho: np.ndarray
    uav_xy: np.ndarray


def action_dim(n_elements, n_users):
    """Raw action length: one (re, im) pair per element, one power logit per
    user, two position coordinates."""
    return 2 * n_elements + n_users + 2


def state_dim(n_elements, n_users):
    """Observation length: rates + phase pairs + power split + position."""
    return 2 * (n_elements + n_users + 1)


def decode_action(raw, n_elements, n_users, area):
    """Map an unconstrained raw vector onto the feasible control set.

    Phase block: consecutive (re, im) pairs become angles via atan2, wrapped
    into [0, 2pi). Power block: exponential normalization, so the split sums
    to one exactly. Position block: clipped to [-1, 1] then mapped affinely
    onto the service rectangle.
    """
    raw = check_vector(raw, action_dim(n_elements, n_users), "raw action")
    pairs = raw[: 2 * n_elements].reshape(n_elements, 2)
    theta = wrap_angle(np.arctan2(pairs[:, 1], pairs[:, 0]))
    logits = raw[2 * n_elements : 2 * n_elements + n_users]
    shifted = np.exp(logits - logits.max())
    rho = shifted / shifted.sum()
    z = np.clip(raw[-2:], -1.0, 1.0)
    return ControlAction(theta=theta, rho=rho, uav_xy=area.from_unit(z))


def assemble_state(rates, theta, rho, uav_xy):
    """Flatten the observation: [rates, (cos, sin) per element, rho, x, y]."""
    phase_pairs = np.empty(2 * len(theta))
    phase_pairs[0::2] = np.cos(theta)
    phase_pairs[1::2] = np.sin(theta)
    return np.concatenate([rates, phase_pairs, rho, uav_xy])


def split_state(state, n_elements, n_users):
    """Inverse of assemble_state, as a dict of named blocks."""
    state = check_vector(state, state_dim(n_elements, n_users), "state")
    k, n2 = n_users, 2 * n_elements
    return {
        "rates": state[:k],
        "phase_reim": state[k : k + n2],
        "rho": state[k + n2 : k + n2 + k],
        "uav_xy": state[-2:],
    }


class IrsUavNomaEnv:
    """Fixed-horizon control environment.

    One instance per run; ``reset`` starts a new episode and ``step`` advances
    it. Channels and user positions are frozen within an episode, so the same
    action always earns the same reward until the next reset.
    """

    def __init__(self, n_elements, n_users, power, area=None,
                 bs_xy=(0.0, 0.0), bs_height=20.0, uav_height=30.0,
                 uav_start_xy=(50.0, 0.0), path_loss_exp=2.0,
                 rician_factor=10.0, r_min=1.2, episode_steps=100):
        check_positive_int(n_elements, "n_elements")
        check_positive_int(n_users, "n_users")
        check_positive_int(episode_steps, "episode_steps")
        check_positive(r_min, "r_min")
        if not isinstance(power, SystemPower):
            raise TypeError("power must be a SystemPower")
        self.n_elements = int(n_elements)
        self.n_users = int(n_users)
        self.power = power
        self.area = area if area is not None else Rectangle(45.0, 45.0, 55.0, 55.0)
        self.bs_xy = np.asarray(bs_xy, dtype=np.float64)
        self.bs_height = float(bs_height)
        self.uav_height = float(uav_height)
        self.uav_start_xy = np.asarray(uav_start_xy, dtype=np.float64)
        self.path_loss_exp = float(path_loss_exp)
        self.rician_factor = float(rician_factor)
        self.r_min = float(r_min)
        self.episode_steps = int(episode_steps)
        self._geometry = None
        self._realization = None
        self._state = None
        self._steps_done = 0
        self.last_report = None

    @property
    def state_dim(self):
        return state_dim(self.n_elements, self.n_users)

    @property
    def action_dim(self):
        return action_dim(self.n_elements, self.n_users)

    @property
    def done(self):
        return self._geometry is None or self._steps_done >= self.episode_steps

    @property
    def state(self):
        return None if self._state is None else self._state.copy()

    def reset(self, rng):
        """Start an episode; returns the initial observation.

        Draw order (fixed for reproducibility): user positions, initial
        reflector angles, then channel fading. The UAV starts on its pad,
        which may sit outside the service area; the power split starts equal.
        """
        if not isinstance(rng, np.random.Generator):
            rng = np.random.default_rng(rng)
        low = (self.area.x_min, self.area.y_min)
        high = (self.area.x_max, self.area.y_max)
        user_xy = rng.uniform(low=low, high=high, size=(self.n_users, 2))
        theta = rng.uniform(0.0, TWO_PI, size=self.n_elements)
        self._geometry = NetworkGeometry(
            bs_xy=self.bs_xy, bs_height=self.bs_height,
            uav_xy=self.uav_start_xy, uav_height=self.uav_height,
            user_xy=user_xy, area=self.area, path_loss_exp=self.path_loss_exp,
        )
        self._realization = sample_rician(self.n_elements, self.n_users,
                                          self.rician_factor, rng)
        rho = np.full(self.n_users, 1.0 / self.n_users)
        self._steps_done = 0
        self._state = self._observe(theta, rho, self.uav_start_xy)
        return self._state.copy()

    def step(self, raw):
        """Apply one raw action; returns (next_state, reward, report)."""
        if self._geometry is None:
            raise NotReadyError("environment not reset")
        if self._steps_done >= self.episode_steps:
            raise NotReadyError("episode finished; call reset before stepping")
        control = decode_action(raw, self.n_elements, self.n_users, self.area)
        self._geometry = dataclasses.replace(self._geometry,
                                             uav_xy=control.uav_xy)
        self._state = self._observe(control.theta, control.rho, control.uav_xy)
        self._steps_done += 1
        reward = self.last_report.sum_rate if self.last_report.qos_ok else 0.0
        return self._state.copy(), reward, self.last_report

    def _observe(self, theta, rho, uav_xy):
        gains = effective_gains(self._realization, theta, self._geometry)
        report = rate_report(np.abs(gains) ** 2, rho, self.power, self.r_min)
        self.last_report = report
        return assemble_state(report.rate, theta, rho, uav_xy)
