"""Experiment configuration: one flat record covering geometry, power,
channel, agent, and run-control fields.

Configs are layered: profile defaults, then an optional key=value file, then
explicit overrides (command-line flags). Every run writes its resolved config
next to its outputs so results are reproducible from the artifact alone.
"""

import dataclasses
from dataclasses import dataclass

from .channel import Rectangle
from .environment import IrsUavNomaEnv
from .errors import ConfigError
from .noma import SystemPower

# The full-size profile mirrors the simulation defaults the model was
# designed around. The desk profile is small enough for laptop-speed runs
# and acceptance tests; its service area, noise floor, and rate floor are
# recalibrated so that placement and power policies carry a measurable
# sum-rate margin over random actions at the reduced element count, while
# the QoS constraint stays satisfiable but occasionally binding.
PAPER_PROFILE = {
    "n_elements": 50,
    "n_users": 4,
    "power_db": 10.0,
    "noise_db": -60.0,
    "r_min": 1.2,
    "episodes": 1000,
    "steps_per_episode": 500,
    "capacity": 50000,
    "warmup": 50000,
}

DESK_PROFILE = {
    "n_elements": 8,
    "n_users": 2,
    "power_db": 10.0,
    "noise_db": -120.0,
    "r_min": 0.05,
    "area_x_min": 20.0,
    "area_y_min": 20.0,
    "area_x_max": 80.0,
    "area_y_max": 80.0,
    "episodes": 200,
    "steps_per_episode": 100,
    "capacity": 5000,
    "warmup": 1000,
}

PROFILES = {"paper": PAPER_PROFILE, "desk": DESK_PROFILE}


@dataclass
class ExperimentConfig:
    """Flat, serializable record of everything a run depends on."""

    # layout and channel
    n_elements: int = 50
    n_users: int = 4
    power_db: float = 10.0
    noise_db: float = -60.0
    rician_factor: float = 10.0
    r_min: float = 1.2
    path_loss_exp: float = 2.0
    area_x_min: float = 45.0
    area_y_min: float = 45.0
    area_x_max: float = 55.0
    area_y_max: float = 55.0
    bs_x: float = 0.0
    bs_y: float = 0.0
    bs_height: float = 20.0
    uav_height: float = 30.0
    uav_start_x: float = 50.0
    uav_start_y: float = 0.0
    # agent
    learning_rate: float = 0.001
    discount: float = 0.95
    tau: float = 0.005
    batch_size: int = 16
    capacity: int = 50000
    warmup: int = 50000
    noise_variance: float = 0.1
    hidden_dim: int = 300
    # run control
    episodes: int = 1000
    steps_per_episode: int = 500
    eval_episodes: int = 50
    checkpoint_every: int = 0
    master_seed: int = None
    out_dir: str = None

    def validate(self):
        """Raises ConfigError naming the offending field."""
        if self.master_seed is None:
            raise ConfigError("master_seed: required, no unseeded runs")
        if not isinstance(self.master_seed, int) or self.master_seed < 0:
            raise ConfigError(f"master_seed: must be a non-negative integer, got {self.master_seed!r}")
        for field in ("n_elements", "n_users", "batch_size", "capacity",
                      "hidden_dim", "episodes", "steps_per_episode",
                      "eval_episodes"):
            value = getattr(self, field)
            if not isinstance(value, int) or value < 1:
                raise ConfigError(f"{field}: must be a positive integer, got {value!r}")
        if not isinstance(self.warmup, int) or self.warmup < self.batch_size:
            raise ConfigError(f"warmup: must be an integer >= batch_size ({self.batch_size}), got {self.warmup!r}")
        if self.warmup > self.capacity:
            raise ConfigError(f"warmup: {self.warmup} exceeds capacity {self.capacity}; the training gate would never open")
        if not isinstance(self.checkpoint_every, int) or self.checkpoint_every < 0:
            raise ConfigError(f"checkpoint_every: must be a non-negative integer, got {self.checkpoint_every!r}")
        if not self.learning_rate > 0:
            raise ConfigError(f"learning_rate: must be positive, got {self.learning_rate}")
        if not 0.0 <= self.discount < 1.0:
            raise ConfigError(f"discount: must lie in [0, 1), got {self.discount}")
        if not 0.0 < self.tau <= 1.0:
            raise ConfigError(f"tau: must lie in (0, 1], got {self.tau}")
        if self.noise_variance < 0:
            raise ConfigError(f"noise_variance: must be non-negative, got {self.noise_variance}")
        if not self.r_min > 0:
            raise ConfigError(f"r_min: must be positive, got {self.r_min}")
        if self.rician_factor < 0:
            raise ConfigError(f"rician_factor: must be non-negative, got {self.rician_factor}")
        if self.path_loss_exp < 0:
            raise ConfigError(f"path_loss_exp: must be non-negative, got {self.path_loss_exp}")
        if not (self.area_x_max > self.area_x_min and self.area_y_max > self.area_y_min):
            raise ConfigError("area_x_max/area_y_max: area bounds must exceed the minima")
        if not self.bs_height > 0:
            raise ConfigError(f"bs_height: must be positive, got {self.bs_height}")
        if not self.uav_height > 0:
            raise ConfigError(f"uav_height: must be positive, got {self.uav_height}")
        return self

    # construction helpers

    def build_power(self):
        return SystemPower.from_db(self.power_db, self.noise_db)

    def build_area(self):
        return Rectangle(self.area_x_min, self.area_y_min,
                         self.area_x_max, self.area_y_max)

    def build_env(self):
        return IrsUavNomaEnv(
            n_elements=self.n_elements,
            n_users=self.n_users,
            power=self.build_power(),
            area=self.build_area(),
            bs_xy=(self.bs_x, self.bs_y),
            bs_height=self.bs_height,
            uav_height=self.uav_height,
            uav_start_xy=(self.uav_start_x, self.uav_start_y),
            path_loss_exp=self.path_loss_exp,
            rician_factor=self.rician_factor,
            r_min=self.r_min,
            episode_steps=self.steps_per_episode,
        )

    def replace(self, **overrides):
        return dataclasses.replace(self, **overrides)

    def resolved_text(self, **extra):
        """Full key=value dump, extras (e.g. mode=...) first."""
        lines = [f"{key}={value}" for key, value in sorted(extra.items())]
        for field in dataclasses.fields(self):
            lines.append(f"{field.name}={getattr(self, field.name)}")
        return "\n".join(lines) + "\n"


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(ExperimentConfig)}


def _coerce(key, raw):
    kind = _FIELD_TYPES[key]
    try:
        if kind is int or kind == "int":
            return int(raw)
        if kind is float or kind == "float":
            return float(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: cannot parse {raw!r}") from None
    return str(raw)


def parse_config_file(path):
    """key=value lines; blank lines and #-comments ignored."""
    values = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"config file {path}:{lineno}: expected key=value, got {line!r}")
            key, _, raw = line.partition("=")
            key = key.strip()
            if key not in _FIELD_TYPES:
                raise ConfigError(f"{key}: unknown config key ({path}:{lineno})")
            values[key] = _coerce(key, raw.strip())
    return values


def load_config(profile="paper", config_path=None, overrides=None):
    """Layer profile defaults, then the config file, then explicit overrides.

    ``overrides`` maps field name to an already-typed value (None entries are
    skipped so optional CLI flags pass through cleanly). The result is
    validated before it is returned.
    """
    if profile not in PROFILES:
        raise ConfigError(f"profile: unknown profile {profile!r}, expected one of {sorted(PROFILES)}")
    values = dict(PROFILES[profile])
    if config_path is not None:
        values.update(parse_config_file(config_path))
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in _FIELD_TYPES:
            raise ConfigError(f"{key}: unknown config key")
        values[key] = _coerce(key, value)
    return ExperimentConfig(**values).validate()
