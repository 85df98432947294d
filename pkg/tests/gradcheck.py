"""Finite-difference gradient check shared by unit and acceptance tests."""

from __future__ import annotations

import numpy as np

from linearcast.models import backward, forward, init_model

from oracles import finite_difference

KINDS = [
    (kind, revin, mode)
    for kind in ("linear", "mlp", "frozen")
    for revin in (False, True)
    for mode in ("shared", "independent")
]


def rel_error(a: np.ndarray, b: np.ndarray) -> float:
    denom = max(np.linalg.norm(a) + np.linalg.norm(b), 1e-12)
    return float(np.linalg.norm(a - b) / denom)


def check_model(kind: str, revin: bool, mode: str, seed: int, c=3, n=16, m=5, h=8, batch=4) -> dict[str, float]:
    """Relative error between analytic and central-difference gradients, per parameter."""
    rng = np.random.default_rng(seed)
    model = init_model(kind, c, n, m, h=h, revin=revin, channel_mode=mode, seed=seed)
    if revin:
        model.revin.gamma[:] = rng.uniform(0.5, 1.5, c)
        model.revin.beta[:] = rng.normal(0, 0.3, c)
    X = rng.normal(size=(batch, c, n)) * rng.uniform(0.5, 3, (1, c, 1)) + rng.normal(0, 2, (1, c, 1))
    Y = rng.normal(size=(batch, c, m))

    def loss():
        _, cache = forward(model, X)
        return backward(model, cache, Y)[1]

    _, cache = forward(model, X)
    grads, _ = backward(model, cache, Y)
    out = {}
    for name, arr in model.parameters().items():
        out[name] = rel_error(grads[name], finite_difference(loss, arr))
    return out
