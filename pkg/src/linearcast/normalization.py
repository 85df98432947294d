"""Reversible instance normalization, comparison normalizers and
moving-average decomposition.

Windows are ``(c, n)`` or batched ``(B, c, n)``; statistics are always taken
over the last (time) axis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateGamma, KernelTooLarge

REVIN_EPS = 1e-5
_GAMMA_MIN = 1e-12


@dataclass
class RevinState:
    """Per-channel affine parameters (trainable)."""

    gamma: np.ndarray
    beta: np.ndarray
    eps: float = REVIN_EPS

    @classmethod
    def init(cls, channels: int, eps: float = REVIN_EPS) -> "RevinState":
        return cls(np.ones(channels), np.zeros(channels), eps)

    def __post_init__(self):
        self.gamma = np.asarray(self.gamma, dtype=np.float64)
        self.beta = np.asarray(self.beta, dtype=np.float64)
        if self.gamma.shape != self.beta.shape or self.gamma.ndim != 1:
            raise ValueError("gamma and beta must be length-c vectors")
        if self.eps <= 0:
            raise ValueError("eps must be > 0")


@dataclass(frozen=True)
class InstanceStats:
    mu: np.ndarray  # (..., c, 1)
    var: np.ndarray = field(repr=False)

    def std(self, eps: float) -> np.ndarray:
        return np.sqrt(self.var + eps)


def revin_forward(x: np.ndarray, state: RevinState) -> tuple[np.ndarray, InstanceStats]:
    x = np.asarray(x, dtype=np.float64)
    mu = x.mean(axis=-1, keepdims=True)
    var = x.var(axis=-1, keepdims=True)
    stats = InstanceStats(mu, var)
    x_hat = (x - mu) / stats.std(state.eps)
    return state.gamma[:, None] * x_hat + state.beta[:, None], stats


def revin_inverse(y_norm: np.ndarray, stats: InstanceStats, state: RevinState) -> np.ndarray:
    if np.any(np.abs(state.gamma) < _GAMMA_MIN):
        raise DegenerateGamma("RevIN gamma too close to zero to invert")
    y_hat = (np.asarray(y_norm, dtype=np.float64) - state.beta[:, None]) / state.gamma[:, None]
    return y_hat * stats.std(state.eps) + stats.mu


def baseline_normalize(batch: np.ndarray, scheme: str, eps: float = REVIN_EPS) -> np.ndarray:
    """Non-reversible normalization of a ``(B, c, n)`` batch; statistics are discarded.

    ``batch_style`` standardizes every (channel, step) position across the
    batch. ``layer_style`` standardizes each window over all channels and
    steps jointly.
    """
    batch = np.asarray(batch, dtype=np.float64)
    if batch.ndim == 2:
        batch = batch[None]
    if batch.shape[0] == 0:
        raise ValueError("batch must be non-empty")
    if scheme == "batch_style":
        axes = (0,)
    elif scheme == "layer_style":
        axes = (1, 2)
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    mu = batch.mean(axis=axes, keepdims=True)
    var = batch.var(axis=axes, keepdims=True)
    return (batch - mu) / np.sqrt(var + eps)


def moving_avg_decompose(x: np.ndarray, kernel: int) -> tuple[np.ndarray, np.ndarray]:
    """Centered moving average with replicate padding; returns ``(trend, seasonal)``."""
    x = np.asarray(x, dtype=np.float64)
    L = x.shape[-1]
    if kernel < 1 or kernel % 2 == 0:
        raise ValueError("kernel must be a positive odd integer")
    if kernel > L:
        raise KernelTooLarge(f"kernel {kernel} exceeds series length {L}")
    half = (kernel - 1) // 2
    pad = [(0, 0)] * (x.ndim - 1) + [(half, half)]
    padded = np.pad(x, pad, mode="edge")
    trend = np.lib.stride_tricks.sliding_window_view(padded, kernel, axis=-1).mean(axis=-1)
    return trend, x - trend
