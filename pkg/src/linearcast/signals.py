"""Deterministic generators for the simulated signals.

Noise comes from ``numpy.random.default_rng(seed)`` (PCG64). Output is
reproducible within one numpy build; no cross-build promise is made.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .series import MultivariateSeries

# Angular frequencies (rad/step) of the three-channel multi-period study.
# Periods 2*pi/omega are roughly 18.8, 31.4 and 62.8 steps.
THREE_SINE_OMEGAS = (1 / 3, 1 / 5, 1 / 10)
# Frequencies spanning 1/30 .. 1/3 for the channel-count study.
MULTIPERIOD_OMEGAS = (1 / 30, 1 / 20, 1 / 10, 1 / 5, 1 / 3)
MULTIPERIOD_LENGTH = 3000
MULTIPERIOD_SHORT_LENGTH = 200


def _noise(length: int, noise_std: float, seed: int, channels: int = 1) -> np.ndarray:
    if noise_std < 0:
        raise ValueError("noise_std must be >= 0")
    if noise_std == 0:
        return np.zeros((channels, length))
    rng = np.random.default_rng(seed)
    return rng.normal(0.0, noise_std, size=(channels, length))


def _steps(length: int) -> np.ndarray:
    if length < 1:
        raise ValueError("length must be >= 1")
    return np.arange(length, dtype=np.float64)


def gen_sine(length, omega, amplitude=1.0, phase=0.0, noise_std=0.0, seed=0) -> MultivariateSeries:
    if omega <= 0:
        raise ValueError("omega must be > 0")
    t = _steps(length)
    values = amplitude * np.sin(omega * t + phase) + _noise(length, noise_std, seed)
    return MultivariateSeries(values)


def gen_trend(length, slope, intercept=0.0) -> MultivariateSeries:
    return MultivariateSeries(slope * _steps(length) + intercept)


def gen_trends(length: int, slopes: Sequence[float], intercepts: Sequence[float]) -> MultivariateSeries:
    """Several linear trends stacked as channels."""
    if len(slopes) != len(intercepts) or not slopes:
        raise ValueError("need one intercept per slope")
    t = _steps(length)
    return MultivariateSeries(np.array([s * t + b for s, b in zip(slopes, intercepts)]))


def gen_season_trend(length, omega, amplitude, slope, intercept=0.0, noise_std=0.0, seed=0) -> MultivariateSeries:
    season = gen_sine(length, omega, amplitude, 0.0, noise_std, seed).values
    return MultivariateSeries(season + gen_trend(length, slope, intercept).values)


def gen_multiperiod(
    length: int,
    omegas: Sequence[float],
    amplitude: float = 1.0,
    noise_std: float = 0.0,
    seed: int = 0,
) -> MultivariateSeries:
    """One zero-phase sine channel per angular frequency, on a shared time axis."""
    omegas = np.asarray(omegas, dtype=np.float64)
    if omegas.size == 0:
        raise ValueError("omegas must be non-empty")
    if np.any(omegas <= 0):
        raise ValueError("omegas must be > 0")
    t = _steps(length)
    values = amplitude * np.sin(omegas[:, None] * t[None, :])
    values = values + _noise(length, noise_std, seed, channels=omegas.size)
    return MultivariateSeries(values)


def gen_integer_periodic(length: int, periods: Sequence[int], amplitude: float = 1.0) -> MultivariateSeries:
    """Multi-period sines whose periods are exact integers (``omega = 2*pi/p``)."""
    return gen_multiperiod(length, [2 * np.pi / p for p in periods], amplitude)


def gen_affine_recurrent(length: int, p: int, a: float, c: float, seed_segment: Sequence[float]) -> MultivariateSeries:
    """``x[t] = seed[t]`` for ``t < p``, then ``x[t] = a * x[t - p] + c``."""
    if p < 1:
        raise ValueError("p must be >= 1")
    seed_segment = np.asarray(seed_segment, dtype=np.float64)
    if seed_segment.shape != (p,):
        raise ValueError(f"seed_segment must have length p={p}")
    x = np.empty(length)
    head = min(p, length)
    x[:head] = seed_segment[:head]
    for t in range(p, length):
        x[t] = a * x[t - p] + c
    return MultivariateSeries(x)


@dataclass(frozen=True)
class SignalSpec:
    """Declarative description of a simulated signal; ``generate()`` builds it."""

    kind: str
    length: int
    params: dict = field(default_factory=dict)
    noise_std: float = 0.0
    seed: int = 0

    KINDS = ("sine", "trend", "season_trend", "multiperiod", "affine_recurrent")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown signal kind {self.kind!r}")
        if self.length < 1:
            raise ValueError("length must be >= 1")
        if self.noise_std < 0:
            raise ValueError("noise_std must be >= 0")

    def generate(self) -> MultivariateSeries:
        p = self.params
        if self.kind == "sine":
            return gen_sine(self.length, p["omega"], p.get("amplitude", 1.0), p.get("phase", 0.0),
                            self.noise_std, self.seed)
        if self.kind == "trend":
            return gen_trend(self.length, p.get("slope", 1.0), p.get("intercept", 0.0))
        if self.kind == "season_trend":
            return gen_season_trend(self.length, p["omega"], p.get("amplitude", 1.0), p.get("slope", 1.0),
                                    p.get("intercept", 0.0), self.noise_std, self.seed)
        if self.kind == "multiperiod":
            return gen_multiperiod(self.length, p["omegas"], p.get("amplitude", 1.0), self.noise_std, self.seed)
        return gen_affine_recurrent(self.length, p["p"], p["a"], p["c"], p["seed_segment"])


def gen_periodic_patterns(length: int, periods: Sequence[int], seed: int = 0) -> MultivariateSeries:
    """Channel ``i`` repeats a random Gaussian pattern of integer length ``periods[i]``.

    Unlike a pure sine, such a channel excites every harmonic of its period,
    so its windows span ``min(p, n)`` directions instead of two.
    """
    rng = np.random.default_rng(seed)
    rows = []
    for p in periods:
        if p < 1:
            raise ValueError("periods must be >= 1")
        pattern = rng.normal(size=int(p))
        rows.append(np.resize(pattern, length))
    return MultivariateSeries(np.array(rows))
