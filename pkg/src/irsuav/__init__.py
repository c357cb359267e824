"""Simulator and deterministic policy-gradient optimizer for a downlink in
which a relay-mounted reflecting surface serves non-orthogonal users: channel
and rate models, a control environment, a from-scratch network engine, the
agent, and an experiment harness.
"""

from .channel import (
    ChannelRealization,
    NetworkGeometry,
    Rectangle,
    effective_gain,
    effective_gains,
    link_distances,
    sample_rician,
    wrap_angle,
)
from .config import DESK_PROFILE, PAPER_PROFILE, ExperimentConfig, load_config
from .ddpg import (
    Batch,
    DdpgAgent,
    EqualPowerCenteredPolicy,
    GreedyActorPolicy,
    RandomPolicy,
    ReplayBuffer,
    rollout,
    run_policy,
    select_action,
    train,
)
from .environment import (
    ControlAction,
    IrsUavNomaEnv,
    assemble_state,
    decode_action,
    split_state,
)
from .errors import ConfigError, NotReadyError, NumericsError
from .estimator import DdpgSumRateOptimizer
from .neuralnet import (
    Adam,
    CriticNet,
    DenseStage,
    Mlp,
    build_actor,
    load_archive,
    save_archive,
    soft_update,
)
from .noma import (
    RateReport,
    SystemPower,
    check_sic,
    decoding_order,
    rate_report,
    sinr_cross,
    sinr_own,
)

__version__ = "0.1.0"

__all__ = [
    "Adam",
    "Batch",
    "ChannelRealization",
    "ConfigError",
    "ControlAction",
    "CriticNet",
    "DdpgAgent",
    "DdpgSumRateOptimizer",
    "DenseStage",
    "DESK_PROFILE",
    "EqualPowerCenteredPolicy",
    "ExperimentConfig",
    "GreedyActorPolicy",
    "IrsUavNomaEnv",
    "Mlp",
    "NetworkGeometry",
    "NotReadyError",
    "NumericsError",
    "PAPER_PROFILE",
    "RandomPolicy",
    "RateReport",
    "Rectangle",
    "ReplayBuffer",
    "SystemPower",
    "assemble_state",
    "build_actor",
    "check_sic",
    "decode_action",
    "decoding_order",
    "effective_gain",
    "effective_gains",
    "link_distances",
    "load_archive",
    "load_config",
    "rate_report",
    "rollout",
    "run_policy",
    "sample_rician",
    "save_archive",
    "select_action",
    "sinr_cross",
    "sinr_own",
    "soft_update",
    "split_state",
    "train",
    "wrap_angle",
]
