"""Analytic transition matrices for periodic and affine-recurrent series.

Row/column indices in docstrings are 1-indexed (``i`` over the ``n`` input
steps, ``j`` over the ``m`` output steps); storage is 0-indexed, so entry
``(i, j)`` lives at ``W[i - 1, j - 1]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    HorizonTooShort,
    InvalidK,
    LcmOverflow,
    PeriodTooLong,
    ShapeMismatch,
    WeightsNotNormalized,
)

LCM_LIMIT = 2**62


@dataclass
class LinearForecaster:
    """``Y = X W + b`` applied to each channel row of ``X``."""

    W: np.ndarray  # (n, m)
    b: np.ndarray  # (m,)

    def __post_init__(self):
        self.W = np.asarray(self.W, dtype=np.float64)
        self.b = np.asarray(self.b, dtype=np.float64)
        if self.W.ndim != 2 or self.b.shape != (self.W.shape[1],):
            raise ShapeMismatch(f"W {self.W.shape} and b {self.b.shape} are inconsistent")
        if not (np.all(np.isfinite(self.W)) and np.all(np.isfinite(self.b))):
            raise ValueError("weights must be finite")

    @property
    def n(self) -> int:
        return self.W.shape[0]

    @property
    def m(self) -> int:
        return self.W.shape[1]

    def predict(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape[-1] != self.n:
            raise ShapeMismatch(f"expected input length {self.n}, got {x.shape[-1]}")
        return x @ self.W + self.b


def _stripe_rows(n: int, m: int, p: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """1-indexed output steps ``j`` and their source rows ``i = n - k*p + (j mod p)``."""
    if p < 1:
        raise ValueError("period must be >= 1")
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    if p > n:
        raise PeriodTooLong(f"period {p} exceeds input length {n}")
    if not 1 <= k <= n // p:
        raise InvalidK(f"k={k} outside [1, {n // p}] for n={n}, p={p}")
    j = np.arange(1, m + 1)
    i = n - k * p + j % p
    bad = (i < 1) | (i > n)
    if np.any(bad):
        jb = int(j[bad][0])
        raise InvalidK(f"k={k}: output step j={jb} maps to row {int(i[bad][0])}, outside [1, {n}]")
    return j, i


def build_periodic_weights(n: int, m: int, p: int, k: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Copy the value ``k`` periods back: one unit entry per column, zero bias."""
    j, i = _stripe_rows(n, m, p, k)
    W = np.zeros((n, m))
    W[i - 1, j - 1] = 1.0
    return W, np.zeros(m)


def build_affine_weights(n: int, m: int, p: int, k: int, a: float, c: float) -> tuple[np.ndarray, np.ndarray]:
    """Exact solution for ``x(t) = a x(t - p) + c``.

    Column ``j`` reaches back ``r_j = k + floor(j / p)`` periods, so its
    coefficient is ``a**r_j`` and its bias ``c * sum(a**l for l < r_j)``.
    For ``j < p`` this is the uniform ``a**k`` form.
    """
    if not (math.isfinite(a) and math.isfinite(c)):
        raise ValueError("a and c must be finite")
    j, i = _stripe_rows(n, m, p, k)
    r = k + j // p
    W = np.zeros((n, m))
    W[i - 1, j - 1] = float(a) ** r
    b = np.array([c * sum(float(a) ** l for l in range(rj)) for rj in r])
    return W, b


def combine_periodic_solutions(
    solutions: Sequence[tuple[np.ndarray, np.ndarray]], weights: Sequence[float]
) -> tuple[np.ndarray, np.ndarray]:
    """Affine combination of exact solutions; weights must sum to one."""
    if len(solutions) == 0 or len(solutions) != len(weights):
        raise ShapeMismatch("need one weight per solution")
    if abs(math.fsum(weights) - 1.0) > 1e-12:
        raise WeightsNotNormalized(f"weights sum to {math.fsum(weights)}, expected 1")
    W0, b0 = solutions[0]
    for W, b in solutions:
        if W.shape != W0.shape or b.shape != b0.shape:
            raise ShapeMismatch("all solutions must share shape")
    W = sum(w * s[0] for w, s in zip(weights, solutions))
    b = sum(w * s[1] for w, s in zip(weights, solutions))
    return W, b


def checked_lcm(values: Sequence[int]) -> int:
    out = 1
    for v in values:
        if v < 1:
            raise ValueError("periods must be positive integers")
        out = math.lcm(out, int(v))
        if out > LCM_LIMIT:
            raise LcmOverflow(f"lcm of {list(values)} exceeds {LCM_LIMIT}")
    return out


def build_multiperiod_solution(periods: Sequence[int], n: int, m: int) -> LinearForecaster:
    """One shared map that is exact for every channel once ``n >= lcm(periods)``."""
    if len(periods) == 0:
        raise ValueError("periods must be non-empty")
    L = checked_lcm(periods)
    if n < L:
        raise HorizonTooShort(f"n={n} is shorter than lcm{tuple(periods)}={L}")
    try:
        W, b = build_periodic_weights(n, m, L, 1)
    except InvalidK:
        # n == lcm and some j is a multiple of it: reach back to row n instead
        # of row 0 (same lag modulo the period, so still exact).
        j = np.arange(1, m + 1)
        W = np.zeros((n, m))
        W[n - L + (j - 1) % L, j - 1] = 1.0
        b = np.zeros(m)
    return LinearForecaster(W, b)
