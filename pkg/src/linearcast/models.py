"""Forecast model variants with hand-written forward and backward passes.

Every core maps each channel row ``(n,)`` to ``(m,)``. Parameters carry a
leading replica axis: size 1 when the core is shared across channels, size
``c`` in channel-independent mode. Inputs are ``(c, n)`` or ``(B, c, n)``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .closed_form import LinearForecaster
from .errors import ShapeMismatch
from .normalization import REVIN_EPS, RevinState, revin_forward, revin_inverse

FROZEN_SEED = 1024
MLP_HIDDEN = 512

CORE_KINDS = ("linear", "mlp", "frozen")
CHANNEL_MODES = ("shared", "independent")

# CLI model names -> (core kind, RevIN, channel mode)
PRESET_MODELS = {
    "linear": ("linear", False, "shared"),
    "rlinear": ("linear", True, "shared"),
    "rmlp": ("mlp", True, "shared"),
    "rlinear-ci": ("linear", True, "independent"),
    "frozen": ("frozen", True, "shared"),
}


def _apply(z: np.ndarray, W: np.ndarray) -> np.ndarray:
    # z (B, c, i), W (r, i, j) with r in {1, c}
    if W.shape[0] == 1:
        return z @ W[0]
    return np.einsum("bci,cij->bcj", z, W)


def _apply_t(d: np.ndarray, W: np.ndarray) -> np.ndarray:
    if W.shape[0] == 1:
        return d @ W[0].T
    return np.einsum("bcj,cij->bci", d, W)


def _grad_w(z: np.ndarray, d: np.ndarray, replicas: int) -> np.ndarray:
    g = np.einsum("bci,bcj->cij", z, d)
    return g.sum(axis=0, keepdims=True) if replicas == 1 else g


def _grad_b(d: np.ndarray, replicas: int) -> np.ndarray:
    g = d.sum(axis=0)
    return g.sum(axis=0, keepdims=True) if replicas == 1 else g


def _uniform(rng: np.random.Generator, fan_in: int, shape) -> np.ndarray:
    bound = 1.0 / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape)


class _Core:
    """Shared plumbing: ``params`` holds the trainable arrays by name."""

    params: dict[str, np.ndarray]
    bias: bool

    @property
    def replicas(self) -> int:
        return next(iter(self.params.values())).shape[0]


@dataclass
class LinearCore(_Core):
    n: int
    m: int
    params: dict[str, np.ndarray] = field(default_factory=dict)
    bias: bool = True

    kind = "linear"

    @classmethod
    def init(cls, n, m, replicas, rng, bias=True):
        params = {"W": _uniform(rng, n, (replicas, n, m))}
        if bias:
            params["b"] = _uniform(rng, n, (replicas, m))
        return cls(n, m, params, bias)

    def forward(self, z):
        return _apply(z, self.params["W"]) + self.params.get("b", 0.0), (z,)

    def backward(self, cache, dout):
        (z,) = cache
        r = self.replicas
        grads = {"W": _grad_w(z, dout, r)}
        if self.bias:
            grads["b"] = _grad_b(dout, r)
        return grads, _apply_t(dout, self.params["W"])

    def transition_matrix(self) -> np.ndarray:
        return self.params["W"]


@dataclass
class MlpCore(_Core):
    """Linear(n, h) -> ReLU -> Linear(h, n), then a Linear(n, m) projection."""

    n: int
    m: int
    hidden: int = MLP_HIDDEN
    params: dict[str, np.ndarray] = field(default_factory=dict)
    bias: bool = True

    kind = "mlp"

    @classmethod
    def init(cls, n, m, replicas, rng, hidden=MLP_HIDDEN, bias=True):
        if hidden < 1:
            raise ValueError("hidden size must be >= 1")
        shapes = [("W1", "b1", n, hidden), ("W2", "b2", hidden, n), ("Wp", "bp", n, m)]
        params = {}
        for wn, bn, fan_in, fan_out in shapes:
            params[wn] = _uniform(rng, fan_in, (replicas, fan_in, fan_out))
            if bias:
                params[bn] = _uniform(rng, fan_in, (replicas, fan_out))
        return cls(n, m, hidden, params, bias)

    def forward(self, z):
        p = self.params
        h1 = _apply(z, p["W1"]) + p.get("b1", 0.0)
        a1 = np.maximum(h1, 0.0)
        h2 = _apply(a1, p["W2"]) + p.get("b2", 0.0)
        out = _apply(h2, p["Wp"]) + p.get("bp", 0.0)
        return out, (z, h1, a1, h2)

    def backward(self, cache, dout):
        z, h1, a1, h2 = cache
        p, r = self.params, self.replicas
        grads = {"Wp": _grad_w(h2, dout, r)}
        dh2 = _apply_t(dout, p["Wp"])
        grads["W2"] = _grad_w(a1, dh2, r)
        dh1 = _apply_t(dh2, p["W2"]) * (h1 > 0)
        grads["W1"] = _grad_w(z, dh1, r)
        if self.bias:
            grads["bp"] = _grad_b(dout, r)
            grads["b2"] = _grad_b(dh2, r)
            grads["b1"] = _grad_b(dh1, r)
        return grads, _apply_t(dh1, p["W1"])

    def transition_matrix(self) -> np.ndarray:
        return self.params["Wp"]


@dataclass
class FrozenRandomCore(_Core):
    """Fixed random ``R (n x n)`` mixing followed by a trainable projection."""

    n: int
    m: int
    R: np.ndarray = None
    params: dict[str, np.ndarray] = field(default_factory=dict)
    bias: bool = True
    frozen_seed: int = FROZEN_SEED

    kind = "frozen"

    @classmethod
    def init(cls, n, m, replicas, rng, frozen_seed=FROZEN_SEED, bias=True):
        R = _uniform(np.random.default_rng(frozen_seed), n, (replicas, n, n))
        R.setflags(write=False)
        params = {"Wp": _uniform(rng, n, (replicas, n, m))}
        if bias:
            params["bp"] = _uniform(rng, n, (replicas, m))
        return cls(n, m, R, params, bias, frozen_seed)

    def forward(self, z):
        u = _apply(z, self.R)
        return _apply(u, self.params["Wp"]) + self.params.get("bp", 0.0), (u,)

    def backward(self, cache, dout):
        (u,) = cache
        r = self.replicas
        grads = {"Wp": _grad_w(u, dout, r)}
        if self.bias:
            grads["bp"] = _grad_b(dout, r)
        return grads, _apply_t(_apply_t(dout, self.params["Wp"]), self.R)

    def transition_matrix(self) -> np.ndarray:
        # The whole core is linear: R @ Wp is its effective n x m map.
        return self.R @ self.params["Wp"]

    def frozen_hash(self) -> str:
        return hashlib.sha256(np.ascontiguousarray(self.R).tobytes()).hexdigest()


@dataclass
class ForecastModel:
    """Optional RevIN around a core applied per channel row."""

    core: LinearCore | MlpCore | FrozenRandomCore
    channels: int
    revin: RevinState | None = None
    channel_mode: str = "shared"

    def __post_init__(self):
        if self.channel_mode not in CHANNEL_MODES:
            raise ValueError(f"unknown channel mode {self.channel_mode!r}")
        expected = 1 if self.channel_mode == "shared" else self.channels
        if self.core.replicas != expected:
            raise ShapeMismatch(
                f"{self.channel_mode} mode needs {expected} core replicas, got {self.core.replicas}"
            )
        if self.revin is not None and self.revin.gamma.shape != (self.channels,):
            raise ShapeMismatch("RevIN parameters must have one entry per channel")

    @property
    def kind(self) -> str:
        return self.core.kind

    @property
    def n(self) -> int:
        return self.core.n

    @property
    def m(self) -> int:
        return self.core.m

    def parameters(self) -> dict[str, np.ndarray]:
        """Live references to every trainable array, keyed by name."""
        params = {f"core.{k}": v for k, v in self.core.params.items()}
        if self.revin is not None:
            params["revin.gamma"] = self.revin.gamma
            params["revin.beta"] = self.revin.beta
        return params

    def state_copy(self) -> dict[str, np.ndarray]:
        return {k: v.copy() for k, v in self.parameters().items()}

    def load_state(self, state: dict[str, np.ndarray]) -> None:
        for k, v in self.parameters().items():
            v[...] = state[k]

    def predict(self, x: np.ndarray) -> np.ndarray:
        return forward(self, x)[0]


def from_linear_forecaster(lf: LinearForecaster, channels: int) -> ForecastModel:
    """Wrap a closed-form ``(W, b)`` as a shared, un-normalized model."""
    core = LinearCore(lf.n, lf.m, {"W": lf.W[None].copy(), "b": lf.b[None].copy()})
    return ForecastModel(core, channels)


def init_model(
    kind: str,
    c: int,
    n: int,
    m: int,
    h: int = MLP_HIDDEN,
    revin: bool = True,
    channel_mode: str = "shared",
    seed: int = 0,
    bias: bool = True,
    frozen_seed: int = FROZEN_SEED,
) -> ForecastModel:
    """Fresh model with ``U(-1/sqrt(fan_in), 1/sqrt(fan_in))`` weights drawn from ``seed``."""
    if min(c, n, m, h) < 1:
        raise ValueError("dimensions must be positive")
    if channel_mode not in CHANNEL_MODES:
        raise ValueError(f"unknown channel mode {channel_mode!r}")
    rng = np.random.default_rng(seed)
    replicas = 1 if channel_mode == "shared" else c
    if kind == "linear":
        core = LinearCore.init(n, m, replicas, rng, bias=bias)
    elif kind == "mlp":
        core = MlpCore.init(n, m, replicas, rng, hidden=h, bias=bias)
    elif kind == "frozen":
        core = FrozenRandomCore.init(n, m, replicas, rng, frozen_seed=frozen_seed, bias=bias)
    else:
        raise ValueError(f"unknown model kind {kind!r}; expected one of {CORE_KINDS}")
    return ForecastModel(core, c, RevinState.init(c, REVIN_EPS) if revin else None, channel_mode)


def init_preset_model(name: str, c: int, n: int, m: int, seed: int = 0, **kwargs) -> ForecastModel:
    kind, revin, mode = PRESET_MODELS[name]
    return init_model(kind, c, n, m, revin=revin, channel_mode=mode, seed=seed, **kwargs)


def forward(model: ForecastModel, x: np.ndarray) -> tuple[np.ndarray, dict]:
    """Predict ``(c, m)`` (or ``(B, c, m)``) from ``(c, n)`` (or ``(B, c, n)``)."""
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 2
    if single:
        x = x[None]
    if x.ndim != 3 or x.shape[1:] != (model.channels, model.n):
        raise ShapeMismatch(f"expected input (B, {model.channels}, {model.n}), got {x.shape}")
    cache = {"single": single}
    if model.revin is not None:
        z, stats = revin_forward(x, model.revin)
        cache["x_hat"] = (x - stats.mu) / stats.std(model.revin.eps)
        cache["stats"] = stats
    else:
        z = x
    out, cache["core"] = model.core.forward(z)
    y = revin_inverse(out, cache["stats"], model.revin) if model.revin is not None else out
    cache["out"] = out
    cache["y"] = y
    return (y[0] if single else y), cache


def backward(model: ForecastModel, cache: dict, y_true: np.ndarray) -> tuple[dict[str, np.ndarray], float]:
    """Mean-squared-error loss and its exact gradient for every trainable array."""
    y = cache["y"]
    y_true = np.asarray(y_true, dtype=np.float64)
    if cache["single"] and y_true.ndim == 2:
        y_true = y_true[None]
    if y_true.shape != y.shape:
        raise ShapeMismatch(f"target shape {y_true.shape} does not match prediction {y.shape}")
    resid = y - y_true
    loss = float(np.mean(resid**2))
    dy = 2.0 * resid / resid.size

    grads: dict[str, np.ndarray] = {}
    rv = model.revin
    if rv is not None:
        s = cache["stats"].std(rv.eps)
        g, bt = rv.gamma[:, None], rv.beta[:, None]
        centered = cache["out"] - bt
        dout = dy * s / g
        d_gamma = -(dy * centered * s / g**2).sum(axis=(0, 2))
        d_beta = -(dy * s / g).sum(axis=(0, 2))
    else:
        dout = dy

    core_grads, dz = model.core.backward(cache["core"], dout)
    grads.update({f"core.{k}": v for k, v in core_grads.items()})

    if rv is not None:
        d_gamma += (dz * cache["x_hat"]).sum(axis=(0, 2))
        d_beta += dz.sum(axis=(0, 2))
        grads["revin.gamma"] = d_gamma
        grads["revin.beta"] = d_beta
    return grads, loss
