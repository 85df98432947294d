"""Series and window data model, dataset splits and z-score scaling."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import BorderOutOfRange, ChannelMismatch, EmptyWindowSet

STD_FLOOR = 1e-8

# Standard ETT protocol: 12/4/4 months of 30 days.
_ETT_MONTH_HOURS = 30 * 24


@dataclass(frozen=True)
class MultivariateSeries:
    """A ``c x T`` real-valued series, row-major by channel."""

    values: np.ndarray
    channel_names: tuple[str, ...] | None = None
    granularity: str | None = None

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64)
        if v.ndim == 1:
            v = v[None, :]
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise ValueError(f"values must be a non-empty (c, T) matrix, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("series values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.channel_names is not None:
            names = tuple(self.channel_names)
            if len(names) != v.shape[0]:
                raise ValueError(f"expected {v.shape[0]} channel names, got {len(names)}")
            if len(set(names)) != len(names):
                raise ValueError("channel names must be unique")
            object.__setattr__(self, "channel_names", names)

    @property
    def channels(self) -> int:
        return self.values.shape[0]

    @property
    def length(self) -> int:
        return self.values.shape[1]

    def slice(self, lo: int, hi: int) -> "MultivariateSeries":
        return MultivariateSeries(self.values[:, lo:hi], self.channel_names, self.granularity)

    def with_values(self, values: np.ndarray) -> "MultivariateSeries":
        return MultivariateSeries(values, self.channel_names, self.granularity)


@dataclass(frozen=True)
class WindowPair:
    x: np.ndarray  # (c, n)
    y: np.ndarray  # (c, m)
    origin_index: int

    @property
    def target_index(self) -> int:
        return self.origin_index + self.x.shape[1]


def make_windows(series: MultivariateSeries, n: int, m: int, stride: int = 1) -> list[WindowPair]:
    """Cut ``series`` into consecutive (input, target) pairs, ordered by origin."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    if stride < 1:
        raise ValueError("stride must be >= 1")
    T = series.length
    if T < n + m:
        raise EmptyWindowSet(f"series of length {T} is shorter than n + m = {n + m}")
    v = series.values
    count = (T - n - m) // stride + 1
    return [
        WindowPair(v[:, o:o + n], v[:, o + n:o + n + m], o)
        for o in (i * stride for i in range(count))
    ]


def window_arrays(series: MultivariateSeries, n: int, m: int, stride: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Batched form of :func:`make_windows`: ``X (N, c, n)`` and ``Y (N, c, m)``.

    Built with a strided view, so it is cheap even for long series.
    """
    if stride < 1:
        raise ValueError("stride must be >= 1")
    T = series.length
    if T < n + m:
        raise EmptyWindowSet(f"series of length {T} is shorter than n + m = {n + m}")
    win = np.lib.stride_tricks.sliding_window_view(series.values, n + m, axis=1)[:, ::stride]
    win = np.ascontiguousarray(win.transpose(1, 0, 2))
    return win[:, :, :n], win[:, :, n:]


def stack_windows(windows: Sequence[WindowPair]) -> tuple[np.ndarray, np.ndarray]:
    if not windows:
        raise EmptyWindowSet("no windows to stack")
    return np.stack([w.x for w in windows]), np.stack([w.y for w in windows])


@dataclass(frozen=True)
class SplitSpec:
    """How a series is cut into train / val / test.

    ``month_ratio_6_2_2`` uses the fixed 12/4/4-month borders of the ETT
    protocol (``steps_per_hour`` = 1 for hourly, 4 for 15-minute data).
    ``ratio_7_2_1`` uses row-count fractions. ``explicit_borders`` takes
    ``borders = (train_lo, train_hi, val_hi, test_hi)``; the val/test starts are
    always derived from ``n`` as ``train_hi - n`` and ``val_hi - n``.
    """

    mode: str
    borders: tuple[int, int, int, int] | None = None
    steps_per_hour: int = 1

    MODES = ("month_ratio_6_2_2", "ratio_7_2_1", "explicit_borders")

    def __post_init__(self):
        if self.mode not in self.MODES:
            raise ValueError(f"unknown split mode {self.mode!r}")
        if self.mode == "explicit_borders" and (self.borders is None or len(self.borders) != 4):
            raise ValueError("explicit_borders needs (train_lo, train_hi, val_hi, test_hi)")

    @classmethod
    def ett_hourly(cls) -> "SplitSpec":
        return cls("month_ratio_6_2_2", steps_per_hour=1)

    @classmethod
    def ett_15min(cls) -> "SplitSpec":
        return cls("month_ratio_6_2_2", steps_per_hour=4)

    @classmethod
    def explicit(cls, train_lo: int, train_hi: int, val_hi: int, test_hi: int) -> "SplitSpec":
        return cls("explicit_borders", (train_lo, train_hi, val_hi, test_hi))

    def resolve(self, T: int, n: int) -> tuple[int, int, int, int, int, int]:
        """Six borders ``(train_lo, train_hi, val_lo, val_hi, test_lo, test_hi)``."""
        if self.mode == "month_ratio_6_2_2":
            month = _ETT_MONTH_HOURS * self.steps_per_hour
            train_lo, train_hi, val_hi, test_hi = 0, 12 * month, 16 * month, 20 * month
        elif self.mode == "ratio_7_2_1":
            n_train, n_val = int(T * 0.7), int(T * 0.2)
            train_lo, train_hi, val_hi, test_hi = 0, n_train, n_train + n_val, T
        else:
            train_lo, train_hi, val_hi, test_hi = self.borders
        if not (0 <= train_lo < train_hi <= val_hi <= test_hi <= T):
            raise BorderOutOfRange(
                f"borders {(train_lo, train_hi, val_hi, test_hi)} invalid for a series of length {T}"
            )
        val_lo, test_lo = train_hi - n, val_hi - n
        if val_lo < 0 or test_lo < 0:
            raise BorderOutOfRange(f"input length n={n} reaches before the start of the series")
        return train_lo, train_hi, val_lo, val_hi, test_lo, test_hi


def split_series(
    series: MultivariateSeries, spec: SplitSpec, n: int
) -> tuple[MultivariateSeries, MultivariateSeries, MultivariateSeries]:
    """Split into train/val/test; val and test carry an ``n``-step context prefix."""
    train_lo, train_hi, val_lo, val_hi, test_lo, test_hi = spec.resolve(series.length, n)
    return (
        series.slice(train_lo, train_hi),
        series.slice(val_lo, val_hi),
        series.slice(test_lo, test_hi),
    )


@dataclass(frozen=True)
class ScalerStats:
    mean: np.ndarray
    std: np.ndarray = field(repr=False)

    @property
    def channels(self) -> int:
        return self.mean.shape[0]


def fit_scaler(train: MultivariateSeries) -> ScalerStats:
    """Per-channel mean and population std, std floored at ``STD_FLOOR``."""
    v = train.values
    mean = v.mean(axis=1)
    std = np.maximum(v.std(axis=1), STD_FLOOR)
    return ScalerStats(mean, std)


def _check_channels(series: MultivariateSeries, stats: ScalerStats):
    if series.channels != stats.channels:
        raise ChannelMismatch(f"series has {series.channels} channels, scaler has {stats.channels}")


def standardize(series: MultivariateSeries, stats: ScalerStats) -> MultivariateSeries:
    _check_channels(series, stats)
    return series.with_values((series.values - stats.mean[:, None]) / stats.std[:, None])


def destandardize(series: MultivariateSeries, stats: ScalerStats) -> MultivariateSeries:
    _check_channels(series, stats)
    return series.with_values(series.values * stats.std[:, None] + stats.mean[:, None])
