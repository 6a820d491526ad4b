"""Small dense-network toolkit: MLPs, Adam, gradient checking and checkpoints.

Float64 everywhere.  Inputs are ``(batch, features)`` arrays; a 1-D input is
treated as a batch of one and returned 1-D.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

ACTIVATIONS = ("relu", "identity", "softmax")
CHECKPOINT_SCHEMA = "uavbs-checkpoint/1"


def xavier_init(shape, rng: np.random.Generator) -> np.ndarray:
    fan_in, fan_out = shape
    if fan_in <= 0 or fan_out <= 0:
        raise ValueError("layer dimensions must be positive")
    bound = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-bound, bound, size=(fan_in, fan_out))


def softmax(z: np.ndarray) -> np.ndarray:
    z = z - np.max(z, axis=-1, keepdims=True)
    e = np.exp(z)
    return e / np.sum(e, axis=-1, keepdims=True)


def _activate(z, kind):
    if kind == "relu":
        return np.maximum(z, 0.0)
    if kind == "identity":
        return z
    return softmax(z)


def _activation_backward(grad, z, y, kind):
    if kind == "relu":
        return grad * (z > 0)
    if kind == "identity":
        return grad
    return y * (grad - np.sum(grad * y, axis=-1, keepdims=True))


@dataclass
class Dense:
    weight: np.ndarray
    bias: np.ndarray
    activation: str = "relu"

    def __post_init__(self):
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")
        if self.weight.ndim != 2 or self.bias.shape != (self.weight.shape[1],):
            raise ValueError("bias must match the weight's output dimension")
        if not (np.all(np.isfinite(self.weight)) and np.all(np.isfinite(self.bias))):
            raise ValueError("parameters must be finite")

    @property
    def fan_in(self) -> int:
        return self.weight.shape[0]

    @property
    def fan_out(self) -> int:
        return self.weight.shape[1]


class Mlp:
    """Chain of dense layers; only the last layer may use softmax."""

    def __init__(self, layers: Sequence[Dense]):
        layers = list(layers)
        if not layers:
            raise ValueError("an MLP needs at least one layer")
        for a, b in zip(layers, layers[1:]):
            if a.fan_out != b.fan_in:
                raise ValueError(f"layer sizes do not chain: {a.fan_out} -> {b.fan_in}")
        if any(layer.activation == "softmax" for layer in layers[:-1]):
            raise ValueError("softmax is only allowed on the final layer")
        self.layers = layers

    @classmethod
    def build(cls, sizes: Sequence[int], activations: Sequence[str], rng: np.random.Generator) -> "Mlp":
        if len(activations) != len(sizes) - 1:
            raise ValueError("need one activation per layer")
        return cls(
            Dense(xavier_init((i, o), rng), np.zeros(o), act)
            for i, o, act in zip(sizes[:-1], sizes[1:], activations)
        )

    @classmethod
    def policy(cls, n_in: int, n_out: int, rng, hidden: int = 64, depth: int = 6, head: str = "softmax") -> "Mlp":
        """``depth`` dense layers: ReLU hidden layers of width ``hidden``, then ``head``."""
        sizes = [n_in] + [hidden] * (depth - 1) + [n_out]
        return cls.build(sizes, ["relu"] * (depth - 1) + [head], rng)

    @property
    def n_in(self) -> int:
        return self.layers[0].fan_in

    @property
    def n_out(self) -> int:
        return self.layers[-1].fan_out

    def params(self) -> list[np.ndarray]:
        out = []
        for layer in self.layers:
            out += [layer.weight, layer.bias]
        return out

    def set_params(self, values: Sequence[np.ndarray]) -> None:
        values = list(values)
        if len(values) != 2 * len(self.layers):
            raise ValueError("parameter count mismatch")
        for layer, w, b in zip(self.layers, values[::2], values[1::2]):
            if w.shape != layer.weight.shape or b.shape != layer.bias.shape:
                raise ValueError("parameter shape mismatch")
            layer.weight = np.array(w, dtype=float)
            layer.bias = np.array(b, dtype=float)

    def copy(self) -> "Mlp":
        return Mlp(Dense(l.weight.copy(), l.bias.copy(), l.activation) for l in self.layers)

    def forward(self, x):
        x = np.asarray(x, dtype=float)
        squeeze = x.ndim == 1
        h = x[None, :] if squeeze else x
        if h.shape[-1] != self.n_in:
            raise ValueError(f"input width {h.shape[-1]} does not match {self.n_in}")
        cache = []
        for layer in self.layers:
            z = h @ layer.weight + layer.bias
            y = _activate(z, layer.activation)
            cache.append((h, z, y))
            h = y
        return (h[0] if squeeze else h), (squeeze, cache)

    def __call__(self, x):
        """Inference-only forward pass (no backward cache)."""
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.n_in:
            raise ValueError(f"input width {x.shape[-1]} does not match {self.n_in}")
        h = x
        for layer in self.layers:
            h = h @ layer.weight + layer.bias
            if layer.activation == "relu":
                np.maximum(h, 0.0, out=h)
            elif layer.activation == "softmax":
                h = softmax(h)
        return h

    def backward(self, cache, grad_out):
        """Gradients of ``sum(grad_out * output)`` w.r.t. parameters and input.

        Returns ``(param_grads, grad_input)``, grads ordered like :meth:`params`.
        """
        squeeze, layers = cache
        g = np.asarray(grad_out, dtype=float)
        if squeeze:
            g = g[None, :]
        grads = [None] * (2 * len(self.layers))
        for i in range(len(self.layers) - 1, -1, -1):
            layer = self.layers[i]
            h, z, y = layers[i]
            dz = _activation_backward(g, z, y, layer.activation)
            grads[2 * i] = h.T @ dz
            grads[2 * i + 1] = dz.sum(axis=0)
            g = dz @ layer.weight.T
        return grads, (g[0] if squeeze else g)


class Adam:
    """Bias-corrected Adam over a fixed list of parameter arrays, updated in place."""

    def __init__(self, params: Sequence[np.ndarray], lr=1e-3, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr, self.beta1, self.beta2, self.eps = lr, beta1, beta2, eps
        self._shapes = [p.shape for p in params]
        size = sum(p.size for p in params)
        self._m = np.zeros(size)
        self._v = np.zeros(size)
        self.t = 0

    def _split(self, flat):
        out, offset = [], 0
        for shape in self._shapes:
            n = int(np.prod(shape))
            out.append(flat[offset:offset + n].reshape(shape))
            offset += n
        return out

    @property
    def m(self) -> list[np.ndarray]:
        """First-moment accumulators shaped like the parameters (views)."""
        return self._split(self._m)

    @property
    def v(self) -> list[np.ndarray]:
        return self._split(self._v)

    def step(self, params: Sequence[np.ndarray], grads: Sequence[np.ndarray]) -> None:
        if len(params) != len(self.m) or len(grads) != len(self.m):
            raise ValueError("parameter/gradient count mismatch")
        for p, g, m in zip(params, grads, self.m):
            if p.shape != g.shape or p.shape != m.shape:
                raise ValueError(f"shape mismatch {p.shape} vs {g.shape}")
        # one flat update instead of a loop of small array ops
        g = np.concatenate([a.ravel() for a in grads])
        self.t += 1
        c1 = 1.0 - self.beta1**self.t
        c2 = 1.0 - self.beta2**self.t
        self._m *= self.beta1
        self._m += (1.0 - self.beta1) * g
        self._v *= self.beta2
        self._v += (1.0 - self.beta2) * g * g
        delta = self.lr * (self._m / c1) / (np.sqrt(self._v / c2) + self.eps)
        offset = 0
        for p in params:
            p -= delta[offset:offset + p.size].reshape(p.shape)
            offset += p.size

    def state(self) -> dict:
        return {"t": self.t, "m": [a.copy() for a in self.m], "v": [a.copy() for a in self.v]}

    def load_state(self, state: dict) -> None:
        self.t = int(state["t"])
        self._m = np.concatenate([np.asarray(a, dtype=float).ravel() for a in state["m"]])
        self._v = np.concatenate([np.asarray(a, dtype=float).ravel() for a in state["v"]])


def numerical_gradient(f: Callable[[], float], params: Sequence[np.ndarray], h: float = 1e-5):
    """Central finite differences of scalar ``f()`` w.r.t. arrays mutated in place."""
    grads = []
    for p in params:
        g = np.zeros_like(p)
        flat, gflat = p.reshape(-1), g.reshape(-1)
        for i in range(flat.size):
            old = flat[i]
            flat[i] = old + h
            up = f()
            flat[i] = old - h
            down = f()
            flat[i] = old
            gflat[i] = (up - down) / (2.0 * h)
        grads.append(g)
    return grads


def max_relative_error(a: Sequence[np.ndarray], b: Sequence[np.ndarray], floor: float = 1e-8) -> float:
    worst = 0.0
    for x, y in zip(a, b):
        denom = np.maximum(np.abs(x) + np.abs(y), floor)
        worst = max(worst, float(np.max(np.abs(x - y) / denom)))
    return worst


ACTIVATION_FLOPS = {"relu": 1, "identity": 0, "softmax": 3}


def flops_count(net: Mlp) -> int:
    """Multiply-adds as two ops, one op per bias add, plus per-unit activation cost."""
    total = 0
    for layer in net.layers:
        total += 2 * layer.fan_in * layer.fan_out + layer.fan_out
        total += ACTIVATION_FLOPS[layer.activation] * layer.fan_out
    return total


def _encode(a: np.ndarray) -> dict:
    return {"shape": list(a.shape), "hex": [float(v).hex() for v in a.ravel()]}


def _decode(d: dict) -> np.ndarray:
    return np.array([float.fromhex(v) for v in d["hex"]], dtype=float).reshape(d["shape"])


def save_checkpoint(path, networks: dict, meta: dict | None = None) -> None:
    """Write named networks as text.

    Line 1 is the schema id; line 2 a JSON object with ``meta`` and, per
    network, a list of layers ``{activation, weight, bias}`` where each array
    stores its shape and row-major values as hexadecimal floats (bit exact).
    """
    body = {
        "meta": meta or {},
        "networks": {
            name: [
                {"activation": l.activation, "weight": _encode(l.weight), "bias": _encode(l.bias)}
                for l in net.layers
            ]
            for name, net in networks.items()
        },
    }
    Path(path).write_text(CHECKPOINT_SCHEMA + "\n" + json.dumps(body) + "\n")


def load_checkpoint(path) -> tuple[dict, dict]:
    text = Path(path).read_text()
    header, _, payload = text.partition("\n")
    if header.strip() != CHECKPOINT_SCHEMA:
        raise ValueError(f"{path}: unsupported checkpoint schema {header.strip()!r}")
    body = json.loads(payload)
    nets = {
        name: Mlp(Dense(_decode(l["weight"]), _decode(l["bias"]), l["activation"]) for l in layers)
        for name, layers in body["networks"].items()
    }
    return nets, body["meta"]
