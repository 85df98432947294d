"""Metrics, test-set evaluation, horizon sweeps and transition-matrix analysis."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import EmptyInput, ForecastError, ShapeMismatch
from .models import ForecastModel
from .training import predict_batched

R2_SS_TOT_FLOOR = 1e-12
DEFAULT_SEEDS = (1024, 2025, 7)


@dataclass(frozen=True)
class Metrics:
    mse: float
    mae: float
    r2: float  # nan when every channel is constant
    r2_undefined_channels: tuple[int, ...] = ()


def compute_metrics(pred: np.ndarray, truth: np.ndarray) -> Metrics:
    """MSE / MAE over all entries; R^2 per channel, averaged over channels.

    ``pred`` and ``truth`` are ``(N, c, m)`` stacks (a single ``(c, m)`` block
    is accepted). Channels whose truth has ``SS_tot < 1e-12`` have no defined
    R^2; they are listed in ``r2_undefined_channels`` and left out of the mean.
    """
    pred = np.asarray(pred, dtype=np.float64)
    truth = np.asarray(truth, dtype=np.float64)
    if pred.shape != truth.shape:
        raise ShapeMismatch(f"prediction {pred.shape} vs truth {truth.shape}")
    if pred.size == 0:
        raise EmptyInput("no entries to score")
    if pred.ndim == 2:
        pred, truth = pred[None], truth[None]
    err = pred - truth
    mse = float(np.mean(err**2))
    mae = float(np.mean(np.abs(err)))

    c = truth.shape[1]
    t = truth.transpose(1, 0, 2).reshape(c, -1)
    e = err.transpose(1, 0, 2).reshape(c, -1)
    ss_tot = np.sum((t - t.mean(axis=1, keepdims=True)) ** 2, axis=1)
    ss_res = np.sum(e**2, axis=1)
    valid = ss_tot >= R2_SS_TOT_FLOOR
    r2 = float(np.mean(1.0 - ss_res[valid] / ss_tot[valid])) if valid.any() else math.nan
    undefined = tuple(int(i) for i in np.flatnonzero(~valid))
    return Metrics(mse, mae, r2, undefined)


@dataclass
class MetricReport:
    mse: float
    mae: float
    r2: float
    dataset: str = ""
    model: str = ""
    n: int = 0
    m: int = 0
    c: int = 0
    seed: int | None = None
    runs: int = 1
    per_run: list[Metrics] = field(default_factory=list)
    r2_undefined_channels: tuple[int, ...] = ()
    error: str | None = None

    @property
    def mse_min(self) -> float:
        return min((r.mse for r in self.per_run), default=self.mse)

    @property
    def mae_min(self) -> float:
        return min((r.mae for r in self.per_run), default=self.mae)

    def row(self) -> dict:
        return {
            "dataset": self.dataset,
            "model": self.model,
            "n": self.n,
            "m": self.m,
            "c": self.c,
            "seed": "" if self.seed is None else self.seed,
            "runs": self.runs,
            "mse": self.mse,
            "mae": self.mae,
            "r2": self.r2,
            "mse_min": self.mse_min,
            "mae_min": self.mae_min,
            "r2_undefined_channels": " ".join(map(str, self.r2_undefined_channels)),
            "error": self.error or "",
        }


def evaluate(
    model: ForecastModel,
    test_xy: tuple[np.ndarray, np.ndarray],
    dataset: str = "",
    model_name: str = "",
    seed: int | None = None,
) -> MetricReport:
    X, Y = test_xy
    if len(X) == 0:
        raise EmptyInput("no test windows")
    met = compute_metrics(predict_batched(model, X), Y)
    return MetricReport(
        met.mse, met.mae, met.r2, dataset, model_name or model.kind, model.n, model.m,
        model.channels, seed, 1, [met], met.r2_undefined_channels,
    )


def aggregate_runs(reports: Sequence[MetricReport]) -> MetricReport:
    """Mean of several seeds' reports; per-run values kept for min/spread."""
    if not reports:
        raise EmptyInput("no runs to aggregate")
    first = reports[0]
    per_run = [r.per_run[0] if r.per_run else Metrics(r.mse, r.mae, r.r2) for r in reports]
    r2s = [r.r2 for r in reports if not math.isnan(r.r2)]
    return MetricReport(
        float(np.mean([r.mse for r in reports])),
        float(np.mean([r.mae for r in reports])),
        float(np.mean(r2s)) if r2s else math.nan,
        first.dataset, first.model, first.n, first.m, first.c, None, len(reports), per_run,
        first.r2_undefined_channels,
    )


def horizon_sweep(
    run_one: Callable[[int], MetricReport],
    input_lens: Sequence[int],
) -> list[MetricReport]:
    """One full train + evaluate per input length, rows ordered by ``n``.

    ``run_one(n)`` does the work (see :func:`linearcast.experiments.run_experiment`).
    A failing row is recorded with its error message; the sweep continues.
    """
    rows = []
    for n in sorted(input_lens):
        try:
            rows.append(run_one(n))
        except (ForecastError, ValueError) as exc:
            rows.append(MetricReport(math.nan, math.nan, math.nan, n=n, error=f"{type(exc).__name__}: {exc}"))
    return rows


def weight_periodicity_profile(W: np.ndarray, signed: bool = False) -> np.ndarray:
    """Mean ``|W|`` along each anti-lag stripe.

    Entry ``(row, col)`` (0-indexed) maps input step ``row`` to output step
    ``n + col``, a lag of ``d + 1`` steps where ``d = (n - 1 - row) + col``.
    Returns ``profile[d]`` for ``d in [0, n - 1]``. With ``signed=True`` the
    stripe mean of ``W`` itself is returned, which separates a lag of one
    full period from a lag of half a period.
    """
    W = np.asarray(W, dtype=np.float64)
    if not signed:
        W = np.abs(W)
    if W.ndim != 2 or min(W.shape) < 1:
        raise ShapeMismatch(f"W must be a non-empty matrix, got {W.shape}")
    n, m = W.shape
    rows, cols = np.indices(W.shape)
    d = (n - 1 - rows) + cols
    keep = d < n
    total = np.bincount(d[keep], weights=W[keep], minlength=n)
    count = np.bincount(d[keep], minlength=n)
    return total / np.maximum(count, 1)


def effective_transition_matrix(W: np.ndarray, inputs: np.ndarray, rtol: float = 1e-8) -> np.ndarray:
    """Part of ``W`` that the training inputs can see.

    ``inputs`` are the (normalized) rows fed to the core, shape ``(N, n)``.
    Components of ``W`` orthogonal to every input never change a prediction,
    so gradient training leaves them at their initial values; projecting them
    out exposes what was actually learned.
    """
    _, S, Vt = np.linalg.svd(np.asarray(inputs, dtype=np.float64), full_matrices=False)
    V = Vt[S > rtol * S[0]]
    return V.T @ (V @ W)


def estimate_period(profile: np.ndarray) -> int:
    """Lag (in steps) of the strongest stripe, ignoring the lag-1 stripe."""
    profile = np.asarray(profile)
    if profile.size < 2:
        return 1
    return int(np.argmax(profile[1:])) + 2


def dominant_period(profile: np.ndarray) -> int:
    """Period of the strongest non-constant Fourier component of a profile.

    Unlike :func:`estimate_period` this picks the fundamental rather than
    whichever multiple of it happens to carry the largest stripe.
    """
    profile = np.asarray(profile, dtype=np.float64)
    if profile.size < 3:
        return 1
    spec = np.abs(np.fft.rfft(profile - profile.mean()))
    k = int(np.argmax(spec[1:])) + 1
    return int(round(profile.size / k))


def write_reports_csv(reports: Sequence[MetricReport], fh) -> None:
    rows = [r.row() for r in reports]
    if not rows:
        return
    w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row)


def format_table(reports: Sequence[MetricReport], columns=("dataset", "model", "n", "m", "mse", "mae", "r2")) -> str:
    """Markdown table for stdout."""
    def cell(v):
        return f"{v:.4g}" if isinstance(v, float) else str(v)

    rows = [[cell(r.row()[c]) for c in columns] for r in reports]
    widths = [max(len(c), *(len(row[i]) for row in rows)) if rows else len(c) for i, c in enumerate(columns)]
    out = io.StringIO()
    out.write("| " + " | ".join(c.ljust(w) for c, w in zip(columns, widths)) + " |\n")
    out.write("|" + "|".join("-" * (w + 2) for w in widths) + "|\n")
    for row in rows:
        out.write("| " + " | ".join(v.ljust(w) for v, w in zip(row, widths)) + " |\n")
    return out.getvalue()
