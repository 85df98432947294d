"""Linear-family long-horizon forecasters, their closed-form periodic
solutions, reversible instance normalization and an experiment harness."""

__version__ = "0.1.0"

from .closed_form import (
    LinearForecaster,
    build_affine_weights,
    build_multiperiod_solution,
    build_periodic_weights,
    combine_periodic_solutions,
)
from .evaluation import MetricReport, compute_metrics, evaluate, weight_periodicity_profile
from .models import ForecastModel, backward, forward, init_model, init_preset_model
from .normalization import RevinState, revin_forward, revin_inverse
from .series import MultivariateSeries, SplitSpec, WindowPair, make_windows, split_series
from .training import TrainConfig, train
