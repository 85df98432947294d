"""End-to-end experiment pipelines shared by the CLI, scripts and acceptance tests.

Every pipeline follows the same protocol: split, fit the scaler on the train
split, standardize all splits, cut stride-1 windows, train, and score on the
standardized test windows.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .evaluation import (
    DEFAULT_SEEDS,
    MetricReport,
    aggregate_runs,
    dominant_period,
    effective_transition_matrix,
    estimate_period,
    evaluate,
    horizon_sweep,
    weight_periodicity_profile,
)
from .models import ForecastModel, init_preset_model
from .normalization import baseline_normalize, revin_forward
from .series import (
    MultivariateSeries,
    ScalerStats,
    SplitSpec,
    fit_scaler,
    split_series,
    standardize,
    window_arrays,
)
from .signals import THREE_SINE_OMEGAS, gen_multiperiod, gen_sine, gen_trends
from .training import TrainConfig, TrainHistory, predict_batched, train

SIM_SPLIT = SplitSpec("ratio_7_2_1")

# Two-channel trend used for the normalization comparison.
TREND_SLOPES = (1.0, 0.5)
TREND_INTERCEPTS = (0.0, 10.0)
TREND_LENGTH = 2000


@dataclass
class DataBundle:
    train: tuple[np.ndarray, np.ndarray]
    val: tuple[np.ndarray, np.ndarray]
    test: tuple[np.ndarray, np.ndarray]
    scaler: ScalerStats


def prepare(series: MultivariateSeries, split: SplitSpec, n: int, m: int) -> DataBundle:
    train_s, val_s, test_s = split_series(series, split, n)
    scaler = fit_scaler(train_s)
    parts = [window_arrays(standardize(s, scaler), n, m) for s in (train_s, val_s, test_s)]
    return DataBundle(*parts, scaler)


@dataclass
class RunResult:
    model: ForecastModel
    history: TrainHistory
    report: MetricReport
    data: DataBundle


def run_experiment(
    series: MultivariateSeries,
    model_name: str,
    n: int,
    m: int,
    config: TrainConfig = TrainConfig(),
    split: SplitSpec = SIM_SPLIT,
    dataset: str = "",
    data: DataBundle | None = None,
    **model_kwargs,
) -> RunResult:
    data = data or prepare(series, split, n, m)
    model = init_preset_model(model_name, series.channels, n, m, seed=config.seed, **model_kwargs)
    model, history = train(model, data.train, data.val, config)
    report = evaluate(model, data.test, dataset, model_name, config.seed)
    return RunResult(model, history, report, data)


def run_seeds(
    series: MultivariateSeries,
    model_name: str,
    n: int,
    m: int,
    config: TrainConfig = TrainConfig(),
    split: SplitSpec = SIM_SPLIT,
    dataset: str = "",
    seeds: Sequence[int] = DEFAULT_SEEDS,
    **model_kwargs,
) -> MetricReport:
    """Train/evaluate once per seed and report the mean (per-run values kept)."""
    data = prepare(series, split, n, m)
    reports = [
        run_experiment(series, model_name, n, m, replace(config, seed=s), split, dataset, data,
                       **model_kwargs).report
        for s in seeds
    ]
    return aggregate_runs(reports)


def sweep_input_lengths(
    series: MultivariateSeries,
    model_name: str,
    input_lens: Sequence[int],
    pred_len: int,
    config: TrainConfig = TrainConfig(),
    split: SplitSpec = SIM_SPLIT,
    dataset: str = "",
) -> list[MetricReport]:
    return horizon_sweep(
        lambda n: run_experiment(series, model_name, n, pred_len, config, split, dataset).report,
        input_lens,
    )


# -- simulated studies --------------------------------------------------------

def channel_study(
    series: MultivariateSeries | None = None,
    models: Sequence[str] = ("rlinear", "rlinear-ci", "rmlp"),
    n: int = 96,
    m: int = 96,
    config: TrainConfig = TrainConfig(),
) -> dict[str, MetricReport]:
    """Shared vs channel-independent vs MLP on a multi-period simulation."""
    series = series if series is not None else gen_multiperiod(3000, THREE_SINE_OMEGAS)
    data = prepare(series, SIM_SPLIT, n, m)
    return {
        name: run_experiment(series, name, n, m, config, data=data, dataset="multiperiod").report
        for name in models
    }


def normalization_study(
    n: int = 96,
    m: int = 96,
    config: TrainConfig = TrainConfig(),
    series: MultivariateSeries | None = None,
) -> dict[str, dict]:
    """Linear forecasting of a two-channel trend under different normalizers.

    ``batch_style`` and ``layer_style`` normalize the model input only (the
    statistics are discarded, so the output is never mapped back).
    ``batch_style`` statistics are taken over each split's full window set.
    """
    series = series if series is not None else gen_trends(TREND_LENGTH, TREND_SLOPES, TREND_INTERCEPTS)
    data = prepare(series, SIM_SPLIT, n, m)
    out = {}
    for name in ("linear", "rlinear"):
        res = run_experiment(series, name, n, m, config, data=data, dataset="trend")
        pred = predict_batched(res.model, data.test[0])
        out[name] = {"report": res.report, "pred": pred}
    for scheme in ("batch_style", "layer_style"):
        def norm(xy):
            return baseline_normalize(xy[0], scheme), xy[1]

        model = init_preset_model("linear", series.channels, n, m, seed=config.seed)
        model, _ = train(model, norm(data.train), norm(data.val), config)
        test = norm(data.test)
        out[scheme] = {
            "report": evaluate(model, test, "trend", f"linear+{scheme}", config.seed),
            "pred": predict_batched(model, test[0]),
        }
    for v in out.values():
        v["truth"] = data.test[1]
    return out


def period_recovery(
    period: int = 24,
    n: int = 96,
    m: int = 24,
    length: int = 2000,
    config: TrainConfig = TrainConfig(),
) -> dict:
    """Train RLinear on a noiseless sine and read the period off its weights.

    ``period`` comes from the raw ``|W|`` stripe profile. ``effective_period``
    first drops the parts of ``W`` no training input ever touched (they keep
    their random initial values) and then takes the fundamental of the
    signed profile.
    """
    series = gen_sine(length, 2 * np.pi / period)
    res = run_experiment(series, "rlinear", n, m, config, dataset=f"sine{period}")
    W = res.model.core.transition_matrix()[0]
    profile = weight_periodicity_profile(W)
    z, _ = revin_forward(res.data.train[0], res.model.revin)
    W_eff = effective_transition_matrix(W, z.reshape(-1, n))
    signed = weight_periodicity_profile(W_eff, signed=True)
    return {"W": W, "profile": profile, "period": estimate_period(profile), "W_effective": W_eff,
            "signed_profile": signed, "effective_period": dominant_period(signed),
            "report": res.report, "model": res.model, "data": res.data}
