"""Experiment runners behind the command line: full training runs, policy
baselines, parameter sweeps, and checkpoint evaluation. Each run owns an
output directory and writes stable CSV artifacts plus its resolved config.
"""

import csv
import dataclasses
import logging
import os

import numpy as np

from .config import ExperimentConfig
from .ddpg import (
    DdpgAgent,
    EqualPowerCenteredPolicy,
    GreedyActorPolicy,
    RandomPolicy,
    rollout,
    run_policy,
    train,
)
from .errors import ConfigError
from .seeding import (
    EVAL_EPISODE,
    EXPLORE,
    POLICY_ACTION,
    SWEEP,
    TRAIN_EPISODE,
    derived_seed,
    stream,
)

logger = logging.getLogger("irsuav")

METRICS_HEADER = ["episode", "accumulated_reward", "mean_critic_loss",
                  "mean_actor_objective", "qos_violation_rate"]
EVAL_HEADER = ["episode", "accumulated_reward", "mean_sum_rate",
               "qos_violation_rate"]
SWEEP_HEADER = ["axis_value", "mean_sum_rate", "baseline_sum_rate"]

SWEEP_AXES = {"power": "power_db", "elements": "n_elements", "users": "n_users"}

BASELINE_POLICIES = ("random", "equal-power-centered")


def prepare_out_dir(out_dir, force=False):
    """Create the run directory; refuse to reuse a non-empty one without
    force so earlier artifacts are never silently clobbered."""
    if out_dir is None:
        raise ConfigError("out_dir: required for experiment runs")
    if os.path.isdir(out_dir) and os.listdir(out_dir) and not force:
        raise ConfigError(f"out_dir: {out_dir} exists and is not empty; pass --force to overwrite")
    os.makedirs(out_dir, exist_ok=True)
    return out_dir


def write_csv(path, header, rows):
    """Write rows with full float round-trip precision and a fixed line
    terminator, so equal data yields byte-identical files."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_cell(v) for v in row])
    return path


def _format_cell(value):
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return str(float(value))
    return str(value)


def _write_resolved_config(config, mode):
    path = os.path.join(config.out_dir, "resolved_config.txt")
    with open(path, "w") as fh:
        fh.write(config.resolved_text(mode=mode))


def _metrics_rows(records):
    return [[r["episode"], r["accumulated_reward"], r["mean_critic_loss"],
             r["mean_actor_objective"], r["qos_violation_rate"]]
            for r in records]


def _eval_rows(stats):
    return [[ep, s.accumulated_reward, s.mean_sum_rate, s.qos_violation_rate]
            for ep, s in enumerate(stats)]


def _final_eval(config, env, policy, out_dir, trace=False):
    """Greedy/baseline evaluation over fresh seeded episodes; returns the
    mean per-episode sum rate. Eval episode seeds depend only on the master
    seed and the episode index, so different policies under one seed face
    identical channels."""
    trace_rows = []
    if trace:
        stats = []
        for ep in range(config.eval_episodes):
            rows = []

            def on_step(t, reward, report, _rows=rows, _ep=ep):
                _rows.append([_ep, t, reward, report.sum_rate,
                              *report.rate, *_report_xy(env), int(report.qos_ok)])

            stats.append(rollout(env, policy,
                                 stream(config.master_seed, EVAL_EPISODE, ep),
                                 stream(config.master_seed, POLICY_ACTION, ep),
                                 on_step=on_step))
            trace_rows.extend(rows)
    else:
        stats = run_policy(env, policy, config.eval_episodes, config.master_seed)
    write_csv(os.path.join(out_dir, "final_eval.csv"), EVAL_HEADER,
              _eval_rows(stats))
    if trace:
        header = ["episode", "step", "reward", "sum_rate"]
        header += [f"rate_{j + 1}" for j in range(config.n_users)]
        header += ["uav_x", "uav_y", "qos_ok"]
        write_csv(os.path.join(out_dir, "trace.csv"), header, trace_rows)
    return float(np.mean([s.mean_sum_rate for s in stats]))


def _report_xy(env):
    xy = env.state[-2:]
    return float(xy[0]), float(xy[1])


def run_train(config, force=False, trace=False):
    """Train, checkpoint, and evaluate one agent. Returns a summary dict."""
    config.validate()
    out_dir = prepare_out_dir(config.out_dir, force)
    _write_resolved_config(config, "run-train")
    log_every = max(1, config.episodes // 10)

    def progress(record, agent):
        ep = record["episode"]
        if (ep + 1) % log_every == 0 or ep == 0:
            logger.info("episode %d/%d reward=%.4f qos_violation=%.2f",
                        ep + 1, config.episodes, record["accumulated_reward"],
                        record["qos_violation_rate"])
        if config.checkpoint_every and (ep + 1) % config.checkpoint_every == 0:
            agent.save(os.path.join(out_dir, f"checkpoint_ep{ep + 1:05d}.npz"),
                       extra=_checkpoint_meta(config))

    result = train(config, progress=progress)
    write_csv(os.path.join(out_dir, "metrics.csv"), METRICS_HEADER,
              _metrics_rows(result.episodes))
    result.agent.save(os.path.join(out_dir, "checkpoint_final.npz"),
                      extra=_checkpoint_meta(config))
    mean_rate = _final_eval(config, result.env,
                            GreedyActorPolicy(result.agent.actor),
                            out_dir, trace=trace)
    logger.info("final greedy eval: mean sum rate %.4f bits/s/Hz", mean_rate)
    return {"out_dir": out_dir, "mean_sum_rate": mean_rate,
            "episodes": result.episodes}


def _checkpoint_meta(config):
    return {"config": dataclasses.asdict(config)}


def _build_policy(name, config):
    if name == "random":
        env_dims = 2 * config.n_elements + config.n_users + 2
        return RandomPolicy(env_dims)
    if name == "equal-power-centered":
        return EqualPowerCenteredPolicy(config.n_elements, config.n_users)
    raise ConfigError(f"policy: unknown baseline policy {name!r}, expected one of {BASELINE_POLICIES}")


def run_baseline(config, policy_name, force=False, trace=False):
    """Episode-for-episode baseline mirroring run_train's artifacts.

    Metrics episodes reuse the training-episode seed stream, so a baseline
    curve overlays a training curve from the same master seed on identical
    environments.
    """
    config.validate()
    policy = _build_policy(policy_name, config)
    out_dir = prepare_out_dir(config.out_dir, force)
    _write_resolved_config(config, f"run-baseline:{policy_name}")
    env = config.build_env()
    records = []
    nan = float("nan")
    for ep in range(config.episodes):
        stats = rollout(env, policy,
                        stream(config.master_seed, TRAIN_EPISODE, ep),
                        stream(config.master_seed, EXPLORE, ep))
        records.append({
            "episode": ep,
            "accumulated_reward": stats.accumulated_reward,
            "mean_critic_loss": nan,
            "mean_actor_objective": nan,
            "qos_violation_rate": stats.qos_violation_rate,
        })
    write_csv(os.path.join(out_dir, "metrics.csv"), METRICS_HEADER,
              _metrics_rows(records))
    mean_rate = _final_eval(config, env, policy, out_dir, trace=trace)
    logger.info("baseline %s eval: mean sum rate %.4f bits/s/Hz",
                policy_name, mean_rate)
    return {"out_dir": out_dir, "mean_sum_rate": mean_rate,
            "episodes": records}


def run_sweep(config, axis, values, force=False):
    """Train once per axis value (derived seeds) and compare the greedy
    policy against the random baseline on shared eval episodes."""
    config.validate()
    if axis not in SWEEP_AXES:
        raise ConfigError(f"axis: unknown sweep axis {axis!r}, expected one of {sorted(SWEEP_AXES)}")
    if not values:
        raise ConfigError("values: sweep needs at least one axis value")
    field = SWEEP_AXES[axis]
    out_dir = prepare_out_dir(config.out_dir, force)
    _write_resolved_config(config, f"run-sweep:{axis}={','.join(str(v) for v in values)}")
    rows = []
    for i, value in enumerate(values):
        try:
            typed = int(value) if field != "power_db" else float(value)
        except (TypeError, ValueError):
            raise ConfigError(f"values: cannot parse {value!r} as {field}") from None
        point = config.replace(**{
            field: typed,
            "master_seed": derived_seed(config.master_seed, SWEEP, i),
            "out_dir": None,
        }).validate()
        logger.info("sweep point %d/%d: %s=%s", i + 1, len(values), field, typed)
        result = train(point)
        greedy = run_policy(result.env, GreedyActorPolicy(result.agent.actor),
                            point.eval_episodes, point.master_seed)
        baseline = run_policy(result.env, RandomPolicy(result.env.action_dim),
                              point.eval_episodes, point.master_seed)
        rows.append([typed,
                     float(np.mean([s.mean_sum_rate for s in greedy])),
                     float(np.mean([s.mean_sum_rate for s in baseline]))])
    write_csv(os.path.join(out_dir, "sweep.csv"), SWEEP_HEADER, rows)
    return {"out_dir": out_dir, "rows": rows}


def eval_checkpoint(checkpoint_path, out_dir, force=False, master_seed=None,
                    eval_episodes=None, trace=False):
    """Reload a saved agent and rerun the greedy evaluation."""
    agent, extra = DdpgAgent.load(checkpoint_path)
    config = ExperimentConfig(**extra["config"])
    if master_seed is not None:
        config = config.replace(master_seed=master_seed)
    if eval_episodes is not None:
        config = config.replace(eval_episodes=eval_episodes)
    config = config.replace(out_dir=out_dir).validate()
    prepare_out_dir(out_dir, force)
    _write_resolved_config(config, f"eval-checkpoint:{checkpoint_path}")
    env = config.build_env()
    mean_rate = _final_eval(config, env, GreedyActorPolicy(agent.actor),
                            out_dir, trace=trace)
    logger.info("checkpoint eval: mean sum rate %.4f bits/s/Hz", mean_rate)
    return {"out_dir": out_dir, "mean_sum_rate": mean_rate}
