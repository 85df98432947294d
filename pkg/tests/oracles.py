"""Independent reference computations used by the tests.

None of these call into the closed-form or model code they are used to check.
"""

from __future__ import annotations

import math

import numpy as np


def periodic_extension(pattern: np.ndarray, length: int, offset: int = 0) -> np.ndarray:
    """``x[t] = pattern[(t + offset) mod p]``."""
    p = len(pattern)
    return np.array([pattern[(t + offset) % p] for t in range(length)], dtype=float)


def affine_unroll(seed: np.ndarray, a: float, c: float, length: int) -> np.ndarray:
    """Plain Python loop for ``x[t] = a x[t-p] + c``."""
    x = [float(v) for v in seed]
    p = len(seed)
    while len(x) < length:
        x.append(a * x[len(x) - p] + c)
    return np.array(x[:length])


def valid_k_max(n: int, m: int, p: int) -> int:
    """Largest k whose rows ``n - k p + (j mod p)`` stay in [1, n] for all j <= m."""
    if m >= p:
        return (n - 1) // p  # j = p gives row n - k p
    return n // p


def lstsq_shared_error(values: np.ndarray, n: int, m: int) -> float:
    """Max-abs residual of the best single affine map fitted to every channel's windows."""
    rows_x, rows_y = [], []
    for ch in values:
        for s in range(len(ch) - n - m + 1):
            rows_x.append(ch[s:s + n])
            rows_y.append(ch[s + n:s + n + m])
    X = np.hstack([np.array(rows_x), np.ones((len(rows_x), 1))])
    Y = np.array(rows_y)
    coef, *_ = np.linalg.lstsq(X, Y, rcond=None)
    return float(np.abs(X @ coef - Y).max())


def finite_difference(f, arr: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Central differences of scalar ``f()`` w.r.t. every entry of ``arr`` (perturbed in place)."""
    g = np.zeros_like(arr)
    it = np.nditer(arr, flags=["multi_index"])
    for _ in it:
        idx = it.multi_index
        old = arr[idx]
        arr[idx] = old + h
        up = f()
        arr[idx] = old - h
        down = f()
        arr[idx] = old
        g[idx] = (up - down) / (2 * h)
    return g


def lcm(*v: int) -> int:
    return math.lcm(*v)
