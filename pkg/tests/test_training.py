import io

import numpy as np
import pytest

from linearcast.errors import EmptyWindowSet, NonFiniteGradient
from linearcast.experiments import prepare, SIM_SPLIT
from linearcast.models import init_model, init_preset_model
from linearcast.signals import gen_sine
from linearcast.training import AdamState, TrainConfig, adam_step, mse, train


def test_adam_zero_gradient():
    p = {"w": np.array([1.5, -2.0])}
    st = AdamState()
    adam_step(p, {"w": np.zeros(2)}, st, 0.1)
    np.testing.assert_array_equal(p["w"], [1.5, -2.0])
    assert st.t == 1


def test_adam_first_step():
    p = {"w": np.array([3.0])}
    adam_step(p, {"w": np.array([1.0])}, AdamState(), 0.1)
    # m_hat = 1, v_hat = 1  ->  step = lr / (1 + eps)
    assert p["w"][0] == pytest.approx(3.0 - 0.1 / (1 + 1e-8), abs=1e-15)


def test_adam_rejects_nan():
    with pytest.raises(NonFiniteGradient):
        adam_step({"w": np.zeros(1)}, {"w": np.array([np.nan])}, AdamState(), 0.1)


def test_adam_matches_reference_loop():
    rng = np.random.default_rng(0)
    w = rng.normal(size=3)
    p = {"w": w.copy()}
    st = AdamState()
    m = v = np.zeros(3)
    ref = w.copy()
    for t in range(1, 6):
        g = rng.normal(size=3)
        adam_step(p, {"w": g}, st, 0.01)
        m = 0.9 * m + 0.1 * g
        v = 0.999 * v + 0.001 * g * g
        ref = ref - 0.01 * (m / (1 - 0.9**t)) / (np.sqrt(v / (1 - 0.999**t)) + 1e-8)
    np.testing.assert_allclose(p["w"], ref, rtol=1e-13)


def test_config_validation():
    for bad in ({"max_epochs": 0}, {"lr": 0}, {"batch_size": 0}, {"patience": 0}, {"patience": 30}):
        with pytest.raises(ValueError):
            TrainConfig(**bad)


def _opposed_data():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(64, 1, 4))
    return (X, 5 * X), (X, -5 * X)


def test_early_stop_and_best_restore():
    tr, va = _opposed_data()
    model = init_model("linear", 1, 4, 4, revin=False, seed=0)
    model, hist = train(model, tr, va, TrainConfig(lr=0.05, batch_size=16, max_epochs=10, patience=1))
    assert hist.epochs == 2
    assert hist.val_loss[1] > hist.val_loss[0]
    assert hist.stopped_early and hist.best_epoch == 1
    assert mse(model, *va) == hist.val_loss[0]


def test_training_is_deterministic():
    tr, va = _opposed_data()
    tr = (tr[0], tr[1] + 0.1)
    runs = []
    for _ in range(2):
        model = init_model("mlp", 1, 4, 4, h=6, seed=1)
        runs.append(train(model, tr, (tr[0][:8], tr[1][:8]), TrainConfig(batch_size=10, max_epochs=4, patience=4)))
    (m1, h1), (m2, h2) = runs
    assert h1.same_trajectory(h2)
    for k, v in m1.parameters().items():
        assert np.array_equal(v, m2.parameters()[k])
    a, b = io.StringIO(), io.StringIO()
    h1.write_csv(a)
    h2.write_csv(b)
    assert a.getvalue() == b.getvalue()
    assert a.getvalue().splitlines()[0] == "epoch,train_mse,val_mse"


def test_noiseless_periodic_rlinear_converges():
    series = gen_sine(1500, 2 * np.pi / 24)
    data = prepare(series, SIM_SPLIT, 48, 24)
    model = init_preset_model("rlinear", 1, 48, 24, seed=1024)
    _, hist = train(model, data.train, data.val, TrainConfig())
    assert min(hist.val_loss) < 1e-4


def test_empty_windows():
    X = np.zeros((0, 1, 4))
    with pytest.raises(EmptyWindowSet):
        train(init_model("linear", 1, 4, 2), (X, np.zeros((0, 1, 2))), (X, np.zeros((0, 1, 2))))
