"""Minimal fully connected network engine: forward, exact backprop, batch
normalization, Adam. Everything is float64 numpy; no autograd, the fixed
topologies here (small actor/critic MLPs) make hand-written gradients the
simpler tool.

Parameter containers expose their arrays through ``params()`` (trainable) and
``state()`` (trainable + normalization running stats) as dicts of live
references, so optimizers and soft updates mutate in place.
"""

import copy
import json

import numpy as np

from .errors import NumericsError

ACTIVATIONS = ("identity", "relu", "tanh")

# Normalization constants. The epsilon is far below float64 noise for the
# O(1) activations seen here but keeps zero-variance batches finite.
BN_EPS = 1e-8
BN_MOMENTUM = 0.1

# Output stages start in a small symmetric range so initial actions and
# values sit near zero.
OUTPUT_SPAN = 3e-3


def _activate(pre, activation):
    if activation == "relu":
        return np.maximum(pre, 0.0)
    if activation == "tanh":
        return np.tanh(pre)
    return pre


def _activation_grad(dout, pre, out, activation):
    if activation == "relu":
        return dout * (pre > 0.0)
    if activation == "tanh":
        return dout * (1.0 - out ** 2)
    return dout


def _uniform(rng, span, shape):
    if rng is None:
        return np.zeros(shape)
    return rng.uniform(-span, span, size=shape)


class DenseStage:
    """Affine map, optional batch normalization, then a fixed activation."""

    def __init__(self, in_dim, out_dim, activation="identity", batch_norm=False,
                 rng=None, weight_span=None):
        if activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {activation!r}")
        span = weight_span if weight_span is not None else 1.0 / np.sqrt(in_dim)
        self.in_dim = int(in_dim)
        self.out_dim = int(out_dim)
        self.activation = activation
        self.batch_norm = bool(batch_norm)
        self.weight = _uniform(rng, span, (in_dim, out_dim))
        self.bias = _uniform(rng, span, (out_dim,))
        if batch_norm:
            self.bn_scale = np.ones(out_dim)
            self.bn_shift = np.zeros(out_dim)
            self.run_mean = np.zeros(out_dim)
            self.run_var = np.ones(out_dim)

    def spec(self):
        return {
            "in_dim": self.in_dim,
            "out_dim": self.out_dim,
            "activation": self.activation,
            "batch_norm": self.batch_norm,
        }

    def params(self):
        out = {"weight": self.weight, "bias": self.bias}
        if self.batch_norm:
            out["bn_scale"] = self.bn_scale
            out["bn_shift"] = self.bn_shift
        return out

    def state(self):
        out = self.params()
        if self.batch_norm:
            out["run_mean"] = self.run_mean
            out["run_var"] = self.run_var
        return out

    def forward(self, x, train=False, update_stats=True):
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != self.in_dim:
            raise ValueError(f"expected input of shape (batch, {self.in_dim}), got {x.shape}")
        z = x @ self.weight + self.bias
        cache = {"x": x, "train": bool(train)}
        if self.batch_norm:
            if train:
                mean = z.mean(axis=0)
                var = z.var(axis=0)
                if update_stats:
                    self.run_mean *= 1.0 - BN_MOMENTUM
                    self.run_mean += BN_MOMENTUM * mean
                    self.run_var *= 1.0 - BN_MOMENTUM
                    self.run_var += BN_MOMENTUM * var
            else:
                mean = self.run_mean
                var = self.run_var
            inv_std = 1.0 / np.sqrt(var + BN_EPS)
            z_hat = (z - mean) * inv_std
            pre = self.bn_scale * z_hat + self.bn_shift
            cache.update(z_hat=z_hat, inv_std=inv_std)
        else:
            pre = z
        out = _activate(pre, self.activation)
        cache.update(pre=pre, out=out)
        return out, cache

    def backward(self, cache, dout):
        """Exact gradients of the forward map. Returns (dx, grads)."""
        dpre = _activation_grad(np.asarray(dout, dtype=np.float64), cache["pre"],
                                cache["out"], self.activation)
        grads = {}
        if self.batch_norm:
            z_hat, inv_std = cache["z_hat"], cache["inv_std"]
            grads["bn_scale"] = (dpre * z_hat).sum(axis=0)
            grads["bn_shift"] = dpre.sum(axis=0)
            dz_hat = dpre * self.bn_scale
            if cache["train"]:
                n = z_hat.shape[0]
                dz = (inv_std / n) * (
                    n * dz_hat - dz_hat.sum(axis=0) - z_hat * (dz_hat * z_hat).sum(axis=0)
                )
            else:
                dz = dz_hat * inv_std
        else:
            dz = dpre
        x = cache["x"]
        grads["weight"] = x.T @ dz
        grads["bias"] = dz.sum(axis=0)
        dx = dz @ self.weight.T
        return dx, grads


class Mlp:
    """A chain of dense stages sharing one forward/backward interface."""

    def __init__(self, stages):
        for prev, nxt in zip(stages, stages[1:]):
            if prev.out_dim != nxt.in_dim:
                raise ValueError("stage widths do not chain")
        self.stages = list(stages)

    @property
    def input_dim(self):
        return self.stages[0].in_dim

    @property
    def output_dim(self):
        return self.stages[-1].out_dim

    def forward(self, x, train=False, update_stats=True):
        caches = []
        out = x
        for stage in self.stages:
            out, cache = stage.forward(out, train=train, update_stats=update_stats)
            caches.append(cache)
        return out, caches

    def backward(self, caches, dout):
        if len(caches) != len(self.stages):
            raise ValueError("cache does not match this network's stages")
        grads = {}
        grad = dout
        for i in reversed(range(len(self.stages))):
            grad, stage_grads = self.stages[i].backward(caches[i], grad)
            for name, val in stage_grads.items():
                grads[f"stage{i}.{name}"] = val
        return grad, grads

    def params(self):
        out = {}
        for i, stage in enumerate(self.stages):
            for name, arr in stage.params().items():
                out[f"stage{i}.{name}"] = arr
        return out

    def state(self):
        out = {}
        for i, stage in enumerate(self.stages):
            for name, arr in stage.state().items():
                out[f"stage{i}.{name}"] = arr
        return out

    def clone(self):
        """Deep copy; mutating the clone never touches the original."""
        return copy.deepcopy(self)

    def spec(self):
        return {"kind": "mlp", "stages": [s.spec() for s in self.stages]}

    @classmethod
    def from_spec(cls, spec):
        return cls([DenseStage(**stage_spec) for stage_spec in spec["stages"]])


def build_actor(state_dim, action_dim, hidden_dim, rng, output_span=OUTPUT_SPAN):
    """Policy network: one normalized rectifier stage, tanh output."""
    return Mlp([
        DenseStage(state_dim, hidden_dim, activation="relu", batch_norm=True, rng=rng),
        DenseStage(hidden_dim, action_dim, activation="tanh", rng=rng,
                   weight_span=output_span),
    ])


class CriticNet:
    """Action-value network with separate state and action input branches.

    The two affine branches are summed, normalized, passed through a
    rectifier, then a linear output stage produces the scalar value.
    """

    def __init__(self, state_dim, action_dim, hidden_dim, rng=None,
                 output_span=OUTPUT_SPAN):
        self.state_dim = int(state_dim)
        self.action_dim = int(action_dim)
        self.hidden_dim = int(hidden_dim)
        state_span = 1.0 / np.sqrt(state_dim)
        action_span = 1.0 / np.sqrt(action_dim)
        self.state_weight = _uniform(rng, state_span, (state_dim, hidden_dim))
        self.state_bias = _uniform(rng, state_span, (hidden_dim,))
        self.action_weight = _uniform(rng, action_span, (action_dim, hidden_dim))
        self.action_bias = _uniform(rng, action_span, (hidden_dim,))
        self.bn_scale = np.ones(hidden_dim)
        self.bn_shift = np.zeros(hidden_dim)
        self.run_mean = np.zeros(hidden_dim)
        self.run_var = np.ones(hidden_dim)
        self.out_stage = DenseStage(hidden_dim, 1, activation="identity", rng=rng,
                                    weight_span=output_span)

    @property
    def input_dim(self):
        return self.state_dim + self.action_dim

    def forward(self, states, actions, train=False, update_stats=True):
        states = np.asarray(states, dtype=np.float64)
        actions = np.asarray(actions, dtype=np.float64)
        if states.ndim != 2 or states.shape[1] != self.state_dim:
            raise ValueError(f"expected states of shape (batch, {self.state_dim}), got {states.shape}")
        if actions.shape != (states.shape[0], self.action_dim):
            raise ValueError(f"expected actions of shape ({states.shape[0]}, {self.action_dim}), got {actions.shape}")
        z = states @ self.state_weight + self.state_bias \
            + actions @ self.action_weight + self.action_bias
        if train:
            mean = z.mean(axis=0)
            var = z.var(axis=0)
            if update_stats:
                self.run_mean *= 1.0 - BN_MOMENTUM
                self.run_mean += BN_MOMENTUM * mean
                self.run_var *= 1.0 - BN_MOMENTUM
                self.run_var += BN_MOMENTUM * var
        else:
            mean = self.run_mean
            var = self.run_var
        inv_std = 1.0 / np.sqrt(var + BN_EPS)
        z_hat = (z - mean) * inv_std
        pre = self.bn_scale * z_hat + self.bn_shift
        hidden = np.maximum(pre, 0.0)
        values, out_cache = self.out_stage.forward(hidden, train=train,
                                                   update_stats=update_stats)
        cache = {
            "states": states, "actions": actions, "z_hat": z_hat,
            "inv_std": inv_std, "pre": pre, "hidden": hidden,
            "out_cache": out_cache, "train": bool(train),
        }
        return values[:, 0], cache

    def backward(self, cache, dvalues):
        """Returns (dstates, dactions, grads) for upstream dvalues of shape (batch,)."""
        dvalues = np.asarray(dvalues, dtype=np.float64)
        dhidden, out_grads = self.out_stage.backward(cache["out_cache"],
                                                     dvalues[:, None])
        dpre = dhidden * (cache["pre"] > 0.0)
        z_hat, inv_std = cache["z_hat"], cache["inv_std"]
        grads = {f"out.{k}": v for k, v in out_grads.items()}
        grads["bn_scale"] = (dpre * z_hat).sum(axis=0)
        grads["bn_shift"] = dpre.sum(axis=0)
        dz_hat = dpre * self.bn_scale
        if cache["train"]:
            n = z_hat.shape[0]
            dz = (inv_std / n) * (
                n * dz_hat - dz_hat.sum(axis=0) - z_hat * (dz_hat * z_hat).sum(axis=0)
            )
        else:
            dz = dz_hat * inv_std
        db = dz.sum(axis=0)
        grads["state_weight"] = cache["states"].T @ dz
        grads["state_bias"] = db
        grads["action_weight"] = cache["actions"].T @ dz
        grads["action_bias"] = db.copy()
        dstates = dz @ self.state_weight.T
        dactions = dz @ self.action_weight.T
        return dstates, dactions, grads

    def params(self):
        out = {
            "state_weight": self.state_weight,
            "state_bias": self.state_bias,
            "action_weight": self.action_weight,
            "action_bias": self.action_bias,
            "bn_scale": self.bn_scale,
            "bn_shift": self.bn_shift,
        }
        for name, arr in self.out_stage.params().items():
            out[f"out.{name}"] = arr
        return out

    def state(self):
        out = self.params()
        out["run_mean"] = self.run_mean
        out["run_var"] = self.run_var
        return out

    def clone(self):
        return copy.deepcopy(self)

    def spec(self):
        return {
            "kind": "critic",
            "state_dim": self.state_dim,
            "action_dim": self.action_dim,
            "hidden_dim": self.hidden_dim,
        }

    @classmethod
    def from_spec(cls, spec):
        return cls(spec["state_dim"], spec["action_dim"], spec["hidden_dim"])


class Adam:
    """Adaptive-moment optimizer over a named parameter dict."""

    def __init__(self, learning_rate, beta1=0.9, beta2=0.999, eps=1e-8):
        self.learning_rate = float(learning_rate)
        self.beta1 = float(beta1)
        self.beta2 = float(beta2)
        self.eps = float(eps)
        self.step_count = 0
        self._m = {}
        self._v = {}

    def step(self, params, grads, maximize=False):
        """One in-place update. Checks every gradient for finiteness before
        touching any parameter, so a bad batch leaves the network intact."""
        for name in params:
            if name not in grads:
                raise ValueError(f"missing gradient for parameter {name!r}")
            if not np.all(np.isfinite(grads[name])):
                raise NumericsError(f"non-finite gradient for parameter {name!r}")
        self.step_count += 1
        bias1 = 1.0 - self.beta1 ** self.step_count
        bias2 = 1.0 - self.beta2 ** self.step_count
        for name, param in params.items():
            grad = -grads[name] if maximize else grads[name]
            m = self._m.setdefault(name, np.zeros_like(param))
            v = self._v.setdefault(name, np.zeros_like(param))
            m *= self.beta1
            m += (1.0 - self.beta1) * grad
            v *= self.beta2
            v += (1.0 - self.beta2) * grad ** 2
            param -= self.learning_rate * (m / bias1) / (np.sqrt(v / bias2) + self.eps)


def soft_update(target_net, eval_net, tau):
    """Move every target array toward the evaluation network:
    new_target = tau * eval + (1 - tau) * old_target.

    Normalization running stats track with the same rate so the target's
    eval-mode outputs follow its weights.
    """
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"tau must lie in [0, 1], got {tau}")
    target_state = target_net.state()
    eval_state = eval_net.state()
    if target_state.keys() != eval_state.keys():
        raise ValueError("networks have mismatched parameter sets")
    for name, target_arr in target_state.items():
        eval_arr = eval_state[name]
        if target_arr.shape != eval_arr.shape:
            raise ValueError(f"shape mismatch for {name!r}")
        target_arr[...] = tau * eval_arr + (1.0 - tau) * target_arr


_NETWORK_KINDS = {"mlp": Mlp, "critic": CriticNet}


def save_archive(path, networks, extra=None):
    """Write named networks to one ``.npz`` tensor archive.

    The archive holds every state array under ``<net>/<param>`` plus a JSON
    manifest (key ``__manifest__``) recording each network's architecture and
    any caller metadata. float64 arrays round-trip bit-exactly.
    """
    arrays = {}
    manifest = {"format": "irsuav-tensor-archive", "version": 1,
                "networks": {}, "extra": extra or {}}
    for net_name, net in networks.items():
        manifest["networks"][net_name] = net.spec()
        for param_name, arr in net.state().items():
            arrays[f"{net_name}/{param_name}"] = arr
    arrays["__manifest__"] = np.asarray(json.dumps(manifest))
    np.savez(path, **arrays)


def load_archive(path):
    """Rebuild the networks stored by :func:`save_archive`.

    Returns ``(networks, extra)``.
    """
    with np.load(path, allow_pickle=False) as data:
        manifest = json.loads(str(data["__manifest__"]))
        if manifest.get("format") != "irsuav-tensor-archive":
            raise ValueError(f"{path} is not a tensor archive")
        networks = {}
        for net_name, spec in manifest["networks"].items():
            net = _NETWORK_KINDS[spec["kind"]].from_spec(spec)
            state = net.state()
            for param_name, arr in state.items():
                stored = data[f"{net_name}/{param_name}"]
                if stored.shape != arr.shape:
                    raise ValueError(f"stored shape mismatch for {net_name}/{param_name}")
                arr[...] = stored
            networks[net_name] = net
    return networks, manifest["extra"]
