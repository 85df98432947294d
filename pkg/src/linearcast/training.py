"""Mini-batch training with MSE loss, Adam and early stopping."""

from __future__ import annotations

import csv
import time
from dataclasses import asdict, dataclass, field
from typing import TextIO

import numpy as np

from .errors import EmptyWindowSet, NonFiniteGradient, NonFiniteLoss
from .models import ForecastModel, backward, forward


@dataclass(frozen=True)
class TrainConfig:
    lr: float = 0.005
    batch_size: int = 128
    max_epochs: int = 20
    patience: int = 3
    seed: int = 1024
    shuffle: bool = True

    def __post_init__(self):
        if self.lr <= 0:
            raise ValueError("lr must be > 0")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be >= 1")
        if not 1 <= self.patience <= self.max_epochs:
            raise ValueError("patience must lie in [1, max_epochs]")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class AdamState:
    m: dict[str, np.ndarray] = field(default_factory=dict)
    v: dict[str, np.ndarray] = field(default_factory=dict)
    t: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8


def adam_step(params: dict[str, np.ndarray], grads: dict[str, np.ndarray], state: AdamState, lr: float) -> None:
    """Bias-corrected Adam update, applied to ``params`` in place."""
    for k, g in grads.items():
        if not np.all(np.isfinite(g)):
            raise NonFiniteGradient(f"gradient of {k} contains non-finite values")
    state.t += 1
    bc1 = 1.0 - state.beta1**state.t
    bc2 = 1.0 - state.beta2**state.t
    for k, p in params.items():
        g = grads[k]
        if k not in state.m:
            state.m[k] = np.zeros_like(p)
            state.v[k] = np.zeros_like(p)
        m, v = state.m[k], state.v[k]
        m *= state.beta1
        m += (1.0 - state.beta1) * g
        v *= state.beta2
        v += (1.0 - state.beta2) * (g * g)
        p -= lr * (m / bc1) / (np.sqrt(v / bc2) + state.eps)


@dataclass
class TrainHistory:
    train_loss: list[float] = field(default_factory=list)
    val_loss: list[float] = field(default_factory=list)
    seconds: list[float] = field(default_factory=list)
    best_epoch: int = 0  # 1-indexed
    stopped_early: bool = False

    @property
    def epochs(self) -> int:
        return len(self.val_loss)

    def same_trajectory(self, other: "TrainHistory") -> bool:
        """Equality ignoring wall-clock timings."""
        return (
            self.train_loss == other.train_loss
            and self.val_loss == other.val_loss
            and self.best_epoch == other.best_epoch
            and self.stopped_early == other.stopped_early
        )

    def write_csv(self, fh: TextIO, timing: bool = False) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["epoch", "train_mse", "val_mse"] + (["seconds"] if timing else []))
        for i, (tr, va) in enumerate(zip(self.train_loss, self.val_loss)):
            row = [i + 1, repr(tr), repr(va)]
            if timing:
                row.append(f"{self.seconds[i]:.4f}")
            w.writerow(row)


def predict_batched(model: ForecastModel, X: np.ndarray, chunk: int = 4096) -> np.ndarray:
    return np.concatenate([forward(model, X[i:i + chunk])[0] for i in range(0, len(X), chunk)])


def mse(model: ForecastModel, X: np.ndarray, Y: np.ndarray) -> float:
    # Sum of squares per chunk keeps memory bounded on large validation sets.
    total = 0.0
    for i in range(0, len(X), 4096):
        total += float(np.sum((forward(model, X[i:i + 4096])[0] - Y[i:i + 4096]) ** 2))
    return total / Y.size


def train(
    model: ForecastModel,
    train_xy: tuple[np.ndarray, np.ndarray],
    val_xy: tuple[np.ndarray, np.ndarray],
    config: TrainConfig = TrainConfig(),
) -> tuple[ForecastModel, TrainHistory]:
    """Fit ``model`` in place and return it restored to its best validation epoch.

    ``train_xy`` / ``val_xy`` are stacked windows ``(X (N, c, n), Y (N, c, m))``.
    """
    Xtr, Ytr = train_xy
    Xva, Yva = val_xy
    if len(Xtr) == 0 or len(Xva) == 0:
        raise EmptyWindowSet("training and validation windows must be non-empty")
    rng = np.random.default_rng(config.seed)
    params = model.parameters()
    adam = AdamState()
    history = TrainHistory()
    best_val, best_state, bad_epochs = np.inf, model.state_copy(), 0

    for epoch in range(1, config.max_epochs + 1):
        t0 = time.perf_counter()
        order = rng.permutation(len(Xtr)) if config.shuffle else np.arange(len(Xtr))
        sq_sum = 0.0
        for lo in range(0, len(order), config.batch_size):
            idx = order[lo:lo + config.batch_size]
            _, cache = forward(model, Xtr[idx])
            grads, loss = backward(model, cache, Ytr[idx])
            if not np.isfinite(loss):
                raise NonFiniteLoss(epoch)
            adam_step(params, grads, adam, config.lr)
            sq_sum += loss * len(idx)
        val = mse(model, Xva, Yva)
        if not np.isfinite(val):
            raise NonFiniteLoss(epoch, f"non-finite validation loss at epoch {epoch}")
        history.train_loss.append(sq_sum / len(order))
        history.val_loss.append(val)
        history.seconds.append(time.perf_counter() - t0)
        if val < best_val:
            best_val, best_state, bad_epochs = val, model.state_copy(), 0
            history.best_epoch = epoch
        else:
            bad_epochs += 1
            if bad_epochs >= config.patience:
                history.stopped_early = epoch < config.max_epochs
                break

    model.load_state(best_state)
    return model, history
